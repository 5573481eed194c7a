#pragma once

#include <functional>
#include <span>
#include <vector>

#include "rwre/model.hpp"

namespace rwre {

struct OptimResult {
    std::vector<double> argmax;
    double value = 0.0;
    long evaluations = 0;
    bool converged = false;
};

// Derivative-free scalar maximization on [lo, hi]: Brent-style golden section
// with parabolic interpolation, endpoints included. Returns a point within tol
// of a local maximizer (the global one for unimodal f). Throws EvaluationError
// on a non-finite objective value.
OptimResult maximize_1d(const std::function<double(double)>& f, double lo, double hi,
                        double tol = 1e-6, long max_eval = 500);

// Box-constrained maximization by Nelder-Mead on -f with coordinate clamping,
// restarted from `restarts` scrambled low-discrepancy points plus any supplied
// warm starts. Each run stops when the simplex diameter drops below tol.
OptimResult maximize_box(const std::function<double(std::span<const double>)>& f,
                         std::span<const Interval> box, double tol = 1e-6,
                         int restarts = 5,
                         const std::vector<std::vector<double>>& warm_starts = {});

}  // namespace rwre
