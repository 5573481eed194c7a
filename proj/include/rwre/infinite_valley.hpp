#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <span>
#include <vector>

#include "rwre/model.hpp"

namespace rwre {

// One draw of the Golosov infinite-valley landscape, truncated to the window
// x in [-M, M]. The conditioned potential V~ satisfies V~(0) = 0, V~ >= 0 on
// the right branch and V~ > 0 strictly on the left branch. nu / nu+ / nu- and
// omega~ live on x in [-M+1, M] and are renormalized over the window;
// truncation_mass_bound estimates the neglected tail mass relative to the
// renormalized measure (the zero-drift defect is bounded by it per sample).
class InfiniteValleySample {
  public:
    InfiniteValleySample(int m, std::vector<double> v, std::vector<double> nu,
                         std::vector<double> nu_plus, std::vector<double> nu_minus,
                         std::vector<double> omega, std::vector<int> atom,
                         double trunc_bound, long attempts);

    int m() const { return m_; }
    int lo() const { return -m_ + 1; }  // first site carrying nu / omega~
    int hi() const { return m_; }

    double v(int x) const { return v_[idx_v(x)]; }
    double nu(int x) const { return nu_[idx(x)]; }
    double nu_plus(int x) const { return nu_plus_[idx(x)]; }
    double nu_minus(int x) const { return nu_minus_[idx(x)]; }
    double omega_tilde(int x) const { return omega_[idx(x)]; }
    int atom(int x) const { return atom_[idx(x)]; }

    double truncation_mass_bound() const { return trunc_bound_; }
    long rejection_attempts() const { return attempts_; }

  private:
    std::size_t idx_v(int x) const;
    std::size_t idx(int x) const;
    int m_;
    std::vector<double> v_, nu_, nu_plus_, nu_minus_, omega_;
    std::vector<int> atom_;
    double trunc_bound_;
    long attempts_;
};

// One conditioned branch: prefix sums of i.i.d. atom increments, rejected
// until every partial sum is >= 0 (strict > 0 when strictly_positive).
struct ConditionedBranch {
    std::vector<double> sums;       // size m, partial sums S_1..S_m
    std::vector<int> atom_index;    // which atom produced each increment
    long attempts = 0;
};

ConditionedBranch sample_conditioned_branch(std::span<const double> increments,
                                            std::span<const double> probs, int m,
                                            bool strictly_positive,
                                            std::mt19937_64& rng,
                                            long attempt_cap = 1000000);

// Assembles a window sample from the two branches; omega_values[i] is the
// environment value associated with atom i (the support coordinate for the
// real model). Exposed as a building block for tests with synthetic branches.
InfiniteValleySample assemble_infinite_valley(const ConditionedBranch& left,
                                              const ConditionedBranch& right,
                                              std::span<const double> omega_values);

// Full draw under theta_star: right branch increments log((1-a_i)/a_i), left
// branch the mirrored increments, both with probabilities p. Throws
// SamplerExhaustedError past attempt_cap rejections in either branch.
InfiniteValleySample sample_infinite_valley(const ThetaParams& theta_star, int m,
                                            std::mt19937_64& rng,
                                            long attempt_cap = 1000000);

// L_inf(a) over the window: direct max form and the entropy/KL decomposition.
double l_infinity_value(std::span<const double> a, const InfiniteValleySample& sample);
double l_infinity_entropy_form(std::span<const double> a,
                               const InfiniteValleySample& sample);

struct LInfinityMc {
    std::vector<double> values;
    std::vector<double> trunc_bounds;
    double acceptance_rate = 0.0;  // samples / rejection attempts

    double mean() const;
    double variance() const;  // unbiased
    double std_error() const;
    double mean_trunc_bound() const;
};

LInfinityMc l_infinity_mc(std::span<const double> a, const ThetaParams& theta_star,
                          int m, int samples, std::mt19937_64& rng,
                          long attempt_cap = 1000000);

// Closed forms of the limit criterion for the three named families. For the
// lazy Temkin random branch the limit is affine in nu^(1/2):
//   L_inf = slope * nu_half + intercept.
struct LInfinityClosedForm {
    bool deterministic = true;
    double value = 0.0;      // when deterministic
    double slope = 0.0;      // random branch coefficients
    double intercept = 0.0;
};

LInfinityClosedForm l_infinity_closed(const ModelFamily& family,
                                      std::span<const double> candidate_support_free,
                                      const ThetaParams& theta_star);

// Unique root a' of d_KL(a_star | a) = H(1/2) - H(a_star) on (0, a_star).
double lazy_threshold(double a_star, double tol = 1e-10);

// Mass nu^(j): total nu on sites whose omega~ equals atom j of theta_star.
double atom_mass(const InfiniteValleySample& sample, int atom);

// Minimal export: header "sample_id,L_inf", one row per sample.
void write_l_inf_samples_csv(const LInfinityMc& mc, std::ostream& out);

}  // namespace rwre
