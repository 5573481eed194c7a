#pragma once

#include <span>
#include <vector>

#include "rwre/likelihood.hpp"
#include "rwre/model.hpp"
#include "rwre/optimize.hpp"
#include "rwre/walk.hpp"

namespace rwre {

enum class EstimatorKind { MLE, MPLE, AE, Naive };

std::string estimator_name(EstimatorKind kind);
EstimatorKind estimator_from_name(const std::string& name);

struct OptimOptions {
    double tol = 1e-6;
    int restarts = 5;
    long max_eval_1d = 500;
};

struct Estimate {
    EstimatorKind method = EstimatorKind::MPLE;
    std::vector<double> free;    // family free-parameter coordinates
    std::vector<double> a_hat;   // support estimate (atom vector)
    std::vector<double> p_hat;   // probability estimate (empirical for MPLE)
    double criterion_value = 0.0;
    long evaluations = 0;
    double wall_ms = 0.0;
};

// Maximum pseudo-likelihood: support from argmax of L_n over the family's
// support box, probabilities from the class frequencies R_n(a_bar, i)/R_n.
// Family-tied probability parameters (r for LazyTemkin) are projected into
// `free`. Throws UndefinedCriterionError on an empty range.
Estimate mple(const WalkStats& stats, const ModelFamily& family,
              const OptimOptions& opts = {});

// Maximum likelihood: argmax of l_n over the family's free box; the MPLE
// point is always included as a warm start.
Estimate mle(const WalkStats& stats, const ModelFamily& family,
             const OptimOptions& opts = {});

// Adelman-Enriquez moment estimator for the Temkin family, computed from the
// recorded path: w_hat is the fraction of sites (x > 0) whose first two
// departures were both rightward among those whose first was rightward and
// that departed at least twice; a_hat inverts w = a^2 + (1-a)^2.
struct AeEstimate {
    double w_hat = 0.0;
    double a_hat = 0.0;
    long eligible_sites = 0;   // >= 2 departures, first one rightward
    long confirming_sites = 0; // second departure also rightward
    bool boundary = false;     // w_hat == 1/2 exactly
};

// Throws NoSolutionError when w_hat < 1/2 (the moment equation has no root),
// and std::invalid_argument when no site is eligible.
AeEstimate ae_estimator_temkin(std::span<const int> path);

// Closed-form a for a given w >= 1/2; exposed for the inversion round-trip test.
double ae_invert_w(double w);

// Per-site occupation estimator omega_hat(x) = xi+/xi over the range, with the
// equal-weight empirical mixture summary. Sites with omega_hat == 1/2 split
// evenly between the two half-masses.
struct NaiveEstimate {
    std::vector<int> sites;
    std::vector<double> omega_hat;
    double mass_below_half = 0.0;
    double mass_above_half = 0.0;
};

NaiveEstimate naive_estimator(const WalkStats& stats);

// Second-moment projection of the naive mixture onto the Temkin family:
// matches mean(omega_hat^2) = (a^2 + (1-a)^2)/2, clamped into the box.
double naive_project_temkin(const NaiveEstimate& naive, const ModelFamily& family);

}  // namespace rwre
