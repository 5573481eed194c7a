#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rwre/model.hpp"
#include "rwre/walk.hpp"

namespace rwre {

// Ratio cutpoints beta_0 = -inf < beta_1 < ... < beta_{d-1} < beta_d = +inf
// with beta_i = log((1-a_i)/(1-a_{i+1})) / log(a_{i+1}/a_i).
struct BetaThresholds {
    std::vector<double> beta;  // size d+1
    int d() const { return static_cast<int>(beta.size()) - 1; }
};

BetaThresholds beta_thresholds(std::span<const double> a);

// Per-site most-likely-atom labels over the range, plus per-class counts.
// label[k] is a 0-based atom index; counts[i] is the number of range sites
// labelled i.
struct SiteClassification {
    std::vector<int> sites;            // the range, ascending
    std::vector<int> label;            // same length as sites
    std::vector<std::int64_t> counts;  // size d
    std::int64_t range_size = 0;       // R_n
};

// Classifies each range site by the half-open ratio intervals (beta_{i-1}, beta_i];
// equivalently the smallest argmax of xi+ log a_i + xi- log(1-a_i). Boundary
// ratios (values tied within 1e-12 relative) go to the lower class.
SiteClassification classify_sites(std::span<const double> a, const WalkStats& stats);

// Smallest argmax (same tie rule) for one site; building block and test hook.
int classify_one(std::span<const double> a, std::int64_t xi_plus, std::int64_t xi_minus);

// Annealed log-likelihood, eq-(7) form, evaluated by log-sum-exp:
//   l_n(theta) = sum_{x in range} log sum_i a_i^{xi+} (1-a_i)^{xi-} p_i.
// Empty range gives 0.
double log_likelihood(const ThetaParams& theta, const WalkStats& stats);

// Generic criterion L(a, pi+, pi-) = sum_x max_i { pi+(x) log a_i + pi-(x) log(1-a_i) }
// over dense occupation vectors (shared by the finite-n and infinite-valley forms).
double criterion_L(std::span<const double> a, std::span<const double> pi_plus,
                   std::span<const double> pi_minus);

// L_n(a) = (1/n) sum_{x in range} max_i { xi+ log a_i + xi- log(1-a_i) }.
double pseudo_likelihood_L(std::span<const double> a, const WalkStats& stats);

// K_n(theta) = (1/R_n) sum_x log p_{i_hat(x)}; cross-checked against the
// entropy form -H(freq) - d_KL(freq | p). Throws UndefinedCriterionError when
// the range is empty.
double criterion_K(const ThetaParams& theta, const SiteClassification& classification);

// Expansion remainder r_n(theta) >= 0 from the exact identity
//   l_n = n L_n + R_n K_n + r_n.
double remainder(const ThetaParams& theta, const WalkStats& stats);

}  // namespace rwre
