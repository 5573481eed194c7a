#include "rwre/infinite_valley.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "rwre/errors.hpp"
#include "rwre/likelihood.hpp"
#include "rwre/rng.hpp"

namespace rwre {

InfiniteValleySample::InfiniteValleySample(int m, std::vector<double> v,
                                           std::vector<double> nu,
                                           std::vector<double> nu_plus,
                                           std::vector<double> nu_minus,
                                           std::vector<double> omega,
                                           std::vector<int> atom, double trunc_bound,
                                           long attempts)
    : m_(m),
      v_(std::move(v)),
      nu_(std::move(nu)),
      nu_plus_(std::move(nu_plus)),
      nu_minus_(std::move(nu_minus)),
      omega_(std::move(omega)),
      atom_(std::move(atom)),
      trunc_bound_(trunc_bound),
      attempts_(attempts) {
    const std::size_t sites = static_cast<std::size_t>(2 * m_);
    if (v_.size() != sites + 1 || nu_.size() != sites || nu_plus_.size() != sites ||
        nu_minus_.size() != sites || omega_.size() != sites || atom_.size() != sites)
        throw std::invalid_argument("InfiniteValleySample: inconsistent window sizes");
}

std::size_t InfiniteValleySample::idx_v(int x) const {
    if (x < -m_ || x > m_) throw std::out_of_range("InfiniteValleySample: x outside window");
    return static_cast<std::size_t>(x + m_);
}

std::size_t InfiniteValleySample::idx(int x) const {
    if (x < lo() || x > hi())
        throw std::out_of_range("InfiniteValleySample: x outside nu window");
    return static_cast<std::size_t>(x - lo());
}

ConditionedBranch sample_conditioned_branch(std::span<const double> increments,
                                            std::span<const double> probs, int m,
                                            bool strictly_positive, std::mt19937_64& rng,
                                            long attempt_cap) {
    if (increments.empty() || increments.size() != probs.size())
        throw std::invalid_argument("sample_conditioned_branch: bad atom vectors");
    if (m < 1) throw std::invalid_argument("sample_conditioned_branch: m must be >= 1");
    const int d = static_cast<int>(increments.size());
    std::vector<double> cum(probs.begin(), probs.end());
    for (int i = 1; i < d; ++i) cum[i] += cum[i - 1];

    ConditionedBranch branch;
    branch.sums.resize(static_cast<std::size_t>(m));
    branch.atom_index.resize(static_cast<std::size_t>(m));
    for (long attempt = 1; attempt <= attempt_cap; ++attempt) {
        branch.attempts = attempt;
        double s = 0.0;
        bool ok = true;
        for (int k = 0; k < m; ++k) {
            const double u = uniform01(rng);
            int i = 0;
            while (i + 1 < d && u >= cum[i]) ++i;
            s += increments[i];
            if (strictly_positive ? !(s > 0.0) : !(s >= 0.0)) {
                ok = false;
                break;
            }
            branch.sums[static_cast<std::size_t>(k)] = s;
            branch.atom_index[static_cast<std::size_t>(k)] = i;
        }
        if (ok) return branch;
    }
    throw SamplerExhaustedError(
        "conditioned-branch rejection sampler hit its attempt cap");
}

InfiniteValleySample assemble_infinite_valley(const ConditionedBranch& left,
                                              const ConditionedBranch& right,
                                              std::span<const double> omega_values) {
    if (left.sums.size() != right.sums.size())
        throw std::invalid_argument("assemble_infinite_valley: branch lengths differ");
    const int m = static_cast<int>(right.sums.size());
    const std::size_t sites = static_cast<std::size_t>(2 * m);

    // v[x+m] holds V~(x); left branch sums are V~(-1)..V~(-m).
    std::vector<double> v(sites + 1);
    v[static_cast<std::size_t>(m)] = 0.0;
    for (int k = 1; k <= m; ++k) {
        v[static_cast<std::size_t>(m - k)] = left.sums[static_cast<std::size_t>(k - 1)];
        v[static_cast<std::size_t>(m + k)] = right.sums[static_cast<std::size_t>(k - 1)];
    }

    std::vector<double> weight(sites + 1);
    double total = 0.0;
    for (std::size_t i = 0; i <= sites; ++i) {
        weight[i] = std::exp(-v[i]);
        total += weight[i];
    }
    const double edge = weight.front() + weight.back();
    const double kept = 2.0 * total - edge;
    const double trunc_bound = edge / kept;

    std::vector<double> nu(sites), nu_plus(sites), nu_minus(sites), omega(sites);
    std::vector<int> atom(sites);
    for (std::size_t i = 0; i < sites; ++i) {
        // site x = lo + i with lo = -m+1; weight index of V~(x) is i+1.
        nu_plus[i] = weight[i + 1] / kept;
        nu_minus[i] = weight[i] / kept;
        nu[i] = nu_plus[i] + nu_minus[i];
    }
    // omega~(x) snaps to the generating atom: the increment V~(x) - V~(x-1) is
    // exactly the sampled atom increment, so omega~(x) is a support coordinate.
    for (int k = 1; k <= m; ++k) {
        // Right branch step k sits at site k.
        const int ia = right.atom_index[static_cast<std::size_t>(k - 1)];
        omega[static_cast<std::size_t>(m - 1 + k)] = omega_values[static_cast<std::size_t>(ia)];
        atom[static_cast<std::size_t>(m - 1 + k)] = ia;
        // Left branch step k defines the increment into site 1-k.
        const int ja = left.atom_index[static_cast<std::size_t>(k - 1)];
        omega[static_cast<std::size_t>(m - k)] = omega_values[static_cast<std::size_t>(ja)];
        atom[static_cast<std::size_t>(m - k)] = ja;
    }
    return InfiniteValleySample(m, std::move(v), std::move(nu), std::move(nu_plus),
                                std::move(nu_minus), std::move(omega), std::move(atom),
                                trunc_bound, left.attempts + right.attempts);
}

InfiniteValleySample sample_infinite_valley(const ThetaParams& theta_star, int m,
                                            std::mt19937_64& rng, long attempt_cap) {
    if (m < 10) throw std::invalid_argument("sample_infinite_valley: m must be >= 10");
    theta_star.validate();
    const int d = theta_star.d();
    std::vector<double> inc_right(static_cast<std::size_t>(d));
    std::vector<double> inc_left(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) {
        inc_right[static_cast<std::size_t>(i)] =
            std::log((1.0 - theta_star.a[static_cast<std::size_t>(i)]) /
                     theta_star.a[static_cast<std::size_t>(i)]);
        inc_left[static_cast<std::size_t>(i)] = -inc_right[static_cast<std::size_t>(i)];
    }
    auto right = sample_conditioned_branch(inc_right, theta_star.p, m, false, rng,
                                           attempt_cap);
    auto left = sample_conditioned_branch(inc_left, theta_star.p, m, true, rng,
                                          attempt_cap);
    return assemble_infinite_valley(left, right, theta_star.a);
}

double l_infinity_value(std::span<const double> a, const InfiniteValleySample& sample) {
    std::vector<double> pi_plus, pi_minus;
    const std::size_t sites = static_cast<std::size_t>(2 * sample.m());
    pi_plus.reserve(sites);
    pi_minus.reserve(sites);
    for (int x = sample.lo(); x <= sample.hi(); ++x) {
        pi_plus.push_back(sample.nu_plus(x));
        pi_minus.push_back(sample.nu_minus(x));
    }
    return criterion_L(a, pi_plus, pi_minus);
}

double l_infinity_entropy_form(std::span<const double> a,
                               const InfiniteValleySample& sample) {
    double total = 0.0;
    for (int x = sample.lo(); x <= sample.hi(); ++x) {
        const double w = sample.omega_tilde(x);
        double min_kl = std::numeric_limits<double>::infinity();
        for (double ai : a) min_kl = std::min(min_kl, kl(w, ai));
        total -= sample.nu(x) * (entropy(w) + min_kl);
    }
    return total;
}

double LInfinityMc::mean() const {
    double s = 0.0;
    for (double v : values) s += v;
    return s / static_cast<double>(values.size());
}

double LInfinityMc::variance() const {
    if (values.size() < 2) return 0.0;
    const double m = mean();
    double s = 0.0;
    for (double v : values) s += (v - m) * (v - m);
    return s / static_cast<double>(values.size() - 1);
}

double LInfinityMc::std_error() const {
    return std::sqrt(variance() / static_cast<double>(values.size()));
}

double LInfinityMc::mean_trunc_bound() const {
    double s = 0.0;
    for (double v : trunc_bounds) s += v;
    return s / static_cast<double>(trunc_bounds.size());
}

LInfinityMc l_infinity_mc(std::span<const double> a, const ThetaParams& theta_star,
                          int m, int samples, std::mt19937_64& rng, long attempt_cap) {
    if (samples < 1) throw std::invalid_argument("l_infinity_mc: samples must be >= 1");
    LInfinityMc mc;
    mc.values.reserve(static_cast<std::size_t>(samples));
    mc.trunc_bounds.reserve(static_cast<std::size_t>(samples));
    long attempts = 0;
    for (int s = 0; s < samples; ++s) {
        const auto sample = sample_infinite_valley(theta_star, m, rng, attempt_cap);
        attempts += sample.rejection_attempts();
        const double direct = l_infinity_value(a, sample);
        const double entropic = l_infinity_entropy_form(a, sample);
        if (std::fabs(direct - entropic) > 1e-9 * (1.0 + std::fabs(direct)))
            throw std::logic_error("l_infinity_mc: max form and entropy form disagree");
        mc.values.push_back(direct);
        mc.trunc_bounds.push_back(sample.truncation_mass_bound());
    }
    mc.acceptance_rate = 2.0 * static_cast<double>(samples) / static_cast<double>(attempts);
    return mc;
}

double lazy_threshold(double a_star, double tol) {
    if (!(a_star > 0.0 && a_star < 0.5))
        throw std::domain_error("lazy_threshold: a_star outside (0, 1/2)");
    const double target = std::log(2.0) - entropy(a_star);
    // d_KL(a_star | y) decreases from +inf to 0 on (0, a_star]; bracket and bisect.
    double lo = std::numeric_limits<double>::min();
    double hi = a_star;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (kl(a_star, mid) > target) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

LInfinityClosedForm l_infinity_closed(const ModelFamily& family,
                                      std::span<const double> candidate,
                                      const ThetaParams& theta_star) {
    LInfinityClosedForm out;
    switch (family.kind) {
        case FamilyKind::Temkin: {
            if (candidate.size() != 1)
                throw std::invalid_argument("l_infinity_closed: Temkin candidate is scalar");
            const double a_star = theta_star.a[0];
            out.value = -(entropy(a_star) + kl(a_star, candidate[0]));
            return out;
        }
        case FamilyKind::TwoPoint: {
            if (candidate.size() != 2)
                throw std::invalid_argument("l_infinity_closed: two-point candidate is 2d");
            const double a1 = theta_star.a[0], a2 = theta_star.a[1];
            // Weights from the balance equations: sum nu^(j) = 1 and zero drift.
            const double nu1 = (a2 - 0.5) / (a2 - a1);
            const double nu2 = (0.5 - a1) / (a2 - a1);
            auto cell = [&](double aj) {
                double min_kl = std::numeric_limits<double>::infinity();
                for (double ai : candidate) min_kl = std::min(min_kl, kl(aj, ai));
                return entropy(aj) + min_kl;
            };
            out.value = -(nu1 * cell(a1) + nu2 * cell(a2));
            return out;
        }
        case FamilyKind::LazyTemkin: {
            if (candidate.size() != 1)
                throw std::invalid_argument("l_infinity_closed: lazy candidate is scalar");
            const double a_star = theta_star.a[0];
            const double a = candidate[0];
            const double h_star = entropy(a_star);
            const double gap = std::log(2.0) - h_star;  // d_KL(a_star | 1/2)
            const double min_kl = std::min(kl(a_star, a), gap);
            if (min_kl >= gap) {
                out.value = -std::log(2.0);
                return out;
            }
            out.deterministic = false;
            out.slope = h_star + min_kl - std::log(2.0);
            out.intercept = -(h_star + min_kl);
            return out;
        }
        case FamilyKind::GeneralRecurrent:
            throw std::invalid_argument(
                "l_infinity_closed: no closed form for the general family");
    }
    throw std::logic_error("l_infinity_closed: unreachable");
}

double atom_mass(const InfiniteValleySample& sample, int atom) {
    double mass = 0.0;
    for (int x = sample.lo(); x <= sample.hi(); ++x) {
        if (sample.atom(x) == atom) mass += sample.nu(x);
    }
    return mass;
}

void write_l_inf_samples_csv(const LInfinityMc& mc, std::ostream& out) {
    out << "sample_id,L_inf\n";
    char buf[64];
    for (std::size_t i = 0; i < mc.values.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%zu,%.17g\n", i, mc.values[i]);
        out << buf;
    }
}

}  // namespace rwre
