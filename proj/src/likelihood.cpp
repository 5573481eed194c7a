#include "rwre/likelihood.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "rwre/errors.hpp"

namespace rwre {

namespace {

constexpr double kTieTol = 1e-12;

void check_support(std::span<const double> a) {
    if (a.empty()) throw std::domain_error("support vector is empty");
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!(a[i] > 0.0 && a[i] < 1.0))
            throw std::domain_error("support entry outside (0,1)");
        if (i > 0 && !(a[i] > a[i - 1]))
            throw std::domain_error("support not strictly increasing");
    }
}

// log(a_i), log(1-a_i) tabulated once per call site.
struct LogTable {
    std::vector<double> la, l1a;
    explicit LogTable(std::span<const double> a) {
        la.reserve(a.size());
        l1a.reserve(a.size());
        for (double ai : a) {
            la.push_back(std::log(ai));
            l1a.push_back(std::log(1.0 - ai));
        }
    }
};

double logsumexp(std::span<const double> s) {
    double m = -std::numeric_limits<double>::infinity();
    for (double v : s) m = std::max(m, v);
    double acc = 0.0;
    for (double v : s) acc += std::exp(v - m);
    return m + std::log(acc);
}

int argmax_lower_tie(std::span<const double> values) {
    double m = values[0];
    for (double v : values) m = std::max(m, v);
    const double band = kTieTol * (1.0 + std::fabs(m));
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i] >= m - band) return static_cast<int>(i);
    }
    return 0;
}

}  // namespace

BetaThresholds beta_thresholds(std::span<const double> a) {
    check_support(a);
    const int d = static_cast<int>(a.size());
    BetaThresholds out;
    out.beta.resize(static_cast<std::size_t>(d) + 1);
    out.beta.front() = -std::numeric_limits<double>::infinity();
    out.beta.back() = std::numeric_limits<double>::infinity();
    for (int i = 1; i < d; ++i) {
        out.beta[i] = std::log((1.0 - a[i - 1]) / (1.0 - a[i])) / std::log(a[i] / a[i - 1]);
    }
    return out;
}

int classify_one(std::span<const double> a, std::int64_t xp, std::int64_t xm) {
    const int d = static_cast<int>(a.size());
    if (d == 1) return 0;
    if (xm == 0) return d - 1;  // ratio = +inf
    std::vector<double> values(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) {
        values[i] = static_cast<double>(xp) * std::log(a[i]) +
                    static_cast<double>(xm) * std::log(1.0 - a[i]);
    }
    return argmax_lower_tie(values);
}

SiteClassification classify_sites(std::span<const double> a, const WalkStats& stats) {
    check_support(a);
    const int d = static_cast<int>(a.size());
    const LogTable logs(a);
    SiteClassification out;
    out.counts.assign(static_cast<std::size_t>(d), 0);
    std::vector<double> values(static_cast<std::size_t>(d));
    for (std::size_t x = 1; x < stats.xi.size(); ++x) {
        if (stats.xi[x] < 1) continue;
        const auto xp = static_cast<double>(stats.xi_plus[x]);
        const auto xm = static_cast<double>(stats.xi_minus[x]);
        int label;
        if (stats.xi_minus[x] == 0) {
            label = d - 1;
        } else {
            for (int i = 0; i < d; ++i) values[i] = xp * logs.la[i] + xm * logs.l1a[i];
            label = argmax_lower_tie(values);
        }
        out.sites.push_back(static_cast<int>(x));
        out.label.push_back(label);
        ++out.counts[static_cast<std::size_t>(label)];
    }
    out.range_size = static_cast<std::int64_t>(out.sites.size());
    return out;
}

double log_likelihood(const ThetaParams& theta, const WalkStats& stats) {
    theta.validate();
    const int d = theta.d();
    const LogTable logs(theta.a);
    std::vector<double> lp(theta.p.size());
    for (int i = 0; i < d; ++i) lp[i] = std::log(theta.p[i]);
    std::vector<double> s(static_cast<std::size_t>(d));
    double ell = 0.0;
    for (std::size_t x = 1; x < stats.xi.size(); ++x) {
        if (stats.xi[x] < 1) continue;
        const auto xp = static_cast<double>(stats.xi_plus[x]);
        const auto xm = static_cast<double>(stats.xi_minus[x]);
        for (int i = 0; i < d; ++i) s[i] = lp[i] + xp * logs.la[i] + xm * logs.l1a[i];
        ell += logsumexp(s);
    }
    return ell;
}

double criterion_L(std::span<const double> a, std::span<const double> pi_plus,
                   std::span<const double> pi_minus) {
    check_support(a);
    if (pi_plus.size() != pi_minus.size())
        throw std::invalid_argument("criterion_L: occupation vectors differ in length");
    const LogTable logs(a);
    const int d = static_cast<int>(a.size());
    double total = 0.0;
    for (std::size_t x = 0; x < pi_plus.size(); ++x) {
        if (pi_plus[x] == 0.0 && pi_minus[x] == 0.0) continue;
        double best = -std::numeric_limits<double>::infinity();
        for (int i = 0; i < d; ++i)
            best = std::max(best, pi_plus[x] * logs.la[i] + pi_minus[x] * logs.l1a[i]);
        total += best;
    }
    return total;
}

double pseudo_likelihood_L(std::span<const double> a, const WalkStats& stats) {
    check_support(a);
    const LogTable logs(a);
    const int d = static_cast<int>(a.size());
    double total = 0.0;
    for (std::size_t x = 1; x < stats.xi.size(); ++x) {
        if (stats.xi[x] < 1) continue;
        const auto xp = static_cast<double>(stats.xi_plus[x]);
        const auto xm = static_cast<double>(stats.xi_minus[x]);
        double best = -std::numeric_limits<double>::infinity();
        for (int i = 0; i < d; ++i) best = std::max(best, xp * logs.la[i] + xm * logs.l1a[i]);
        total += best;
    }
    return total / static_cast<double>(stats.n);
}

double criterion_K(const ThetaParams& theta, const SiteClassification& classification) {
    theta.validate();
    if (classification.range_size < 1)
        throw UndefinedCriterionError("criterion_K: empty range");
    if (classification.counts.size() != theta.p.size())
        throw std::invalid_argument("criterion_K: class count does not match theta");
    const double r = static_cast<double>(classification.range_size);
    double direct = 0.0;
    std::vector<double> freq(classification.counts.size());
    for (std::size_t i = 0; i < classification.counts.size(); ++i) {
        freq[i] = static_cast<double>(classification.counts[i]) / r;
        if (classification.counts[i] > 0) direct += freq[i] * std::log(theta.p[i]);
    }
    const double via_entropy = -entropy_vec(freq) - kl_vec(freq, theta.p);
    if (std::fabs(direct - via_entropy) > 1e-10 * (1.0 + std::fabs(direct)))
        throw std::logic_error("criterion_K: direct and entropy forms disagree");
    return direct;
}

double remainder(const ThetaParams& theta, const WalkStats& stats) {
    theta.validate();
    if (stats.range_size() < 1)
        throw UndefinedCriterionError("remainder: empty range");
    const int d = theta.d();
    const LogTable logs(theta.a);
    std::vector<double> lp(theta.p.size());
    for (int i = 0; i < d; ++i) lp[i] = std::log(theta.p[i]);
    std::vector<double> s(static_cast<std::size_t>(d));
    std::vector<double> values(static_cast<std::size_t>(d));
    double r = 0.0;
    for (std::size_t x = 1; x < stats.xi.size(); ++x) {
        if (stats.xi[x] < 1) continue;
        const auto xp = static_cast<double>(stats.xi_plus[x]);
        const auto xm = static_cast<double>(stats.xi_minus[x]);
        int label;
        if (stats.xi_minus[x] == 0) {
            label = d - 1;
        } else {
            for (int i = 0; i < d; ++i) values[i] = xp * logs.la[i] + xm * logs.l1a[i];
            label = argmax_lower_tie(values);
        }
        for (int i = 0; i < d; ++i) s[i] = lp[i] + xp * logs.la[i] + xm * logs.l1a[i];
        // log(1 + sum_{i != label} (p_i/p_label) U_i^xi) = lse(s) - s[label]
        r += logsumexp(s) - s[static_cast<std::size_t>(label)];
    }
    return r;
}

}  // namespace rwre
