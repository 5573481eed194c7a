#include "rwre/estimators.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "rwre/errors.hpp"

namespace rwre {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

void require_range(const WalkStats& stats) {
    if (stats.range_size() < 1)
        throw UndefinedCriterionError("estimator requires a nonempty range");
}

}  // namespace

std::string estimator_name(EstimatorKind kind) {
    switch (kind) {
        case EstimatorKind::MLE: return "mle";
        case EstimatorKind::MPLE: return "mple";
        case EstimatorKind::AE: return "ae";
        case EstimatorKind::Naive: return "naive";
    }
    return "unknown";
}

EstimatorKind estimator_from_name(const std::string& name) {
    if (name == "mle") return EstimatorKind::MLE;
    if (name == "mple") return EstimatorKind::MPLE;
    if (name == "ae") return EstimatorKind::AE;
    if (name == "naive") return EstimatorKind::Naive;
    throw std::invalid_argument("unknown estimator: " + name);
}

Estimate mple(const WalkStats& stats, const ModelFamily& family, const OptimOptions& opts) {
    require_range(stats);
    const auto t0 = Clock::now();
    const auto sbox = family.support_box();

    auto objective = [&](std::span<const double> s) {
        return pseudo_likelihood_L(family.support_atoms(s), stats);
    };

    OptimResult best;
    if (sbox.size() == 1) {
        auto g = [&](double x) { return objective(std::span<const double>(&x, 1)); };
        best = maximize_1d(g, sbox[0].lo, sbox[0].hi, opts.tol, opts.max_eval_1d);
    } else {
        best = maximize_box(objective, sbox, opts.tol, opts.restarts);
    }

    Estimate est;
    est.method = EstimatorKind::MPLE;
    est.a_hat = family.support_atoms(best.argmax);
    est.criterion_value = best.value;
    est.evaluations = best.evaluations;

    const auto cls = classify_sites(est.a_hat, stats);
    est.p_hat.resize(cls.counts.size());
    double partial = 0.0;
    for (std::size_t i = 0; i + 1 < cls.counts.size(); ++i) {
        est.p_hat[i] = static_cast<double>(cls.counts[i]) /
                       static_cast<double>(cls.range_size);
        partial += est.p_hat[i];
    }
    // Last class takes the complement so the vector sums to one exactly.
    est.p_hat.back() = std::max(0.0, 1.0 - partial);

    // Family-projected free coordinates.
    switch (family.kind) {
        case FamilyKind::Temkin:
        case FamilyKind::TwoPoint:
            est.free = best.argmax;
            break;
        case FamilyKind::LazyTemkin:
            est.free = {best.argmax[0], family.box[1].clamp(est.p_hat[1])};
            break;
        case FamilyKind::GeneralRecurrent:
            est.free = best.argmax;
            for (std::size_t i = 0; i + 1 < est.p_hat.size(); ++i)
                est.free.push_back(est.p_hat[i]);
            break;
    }
    est.wall_ms = elapsed_ms(t0);
    return est;
}

Estimate mle(const WalkStats& stats, const ModelFamily& family, const OptimOptions& opts) {
    require_range(stats);
    if (family.kind == FamilyKind::GeneralRecurrent && family.atoms >= 2)
        throw ConstraintError(
            "mle: general d-point support is only searchable inside a "
            "recurrence-satisfying family");
    const auto t0 = Clock::now();

    auto objective = [&](std::span<const double> free) {
        return log_likelihood(family_to_theta(family, free), stats);
    };

    const Estimate warm = mple(stats, family, opts);
    std::vector<double> warm_free = warm.free;
    for (std::size_t k = 0; k < warm_free.size(); ++k)
        warm_free[k] = family.box[k].clamp(warm_free[k]);

    OptimResult best;
    long extra_evals = 0;
    if (family.free_dim() == 1) {
        auto g = [&](double x) { return objective(std::span<const double>(&x, 1)); };
        best = maximize_1d(g, family.box[0].lo, family.box[0].hi, opts.tol,
                           opts.max_eval_1d);
        const double fw = g(warm_free[0]);
        ++extra_evals;
        if (fw > best.value) {
            best.value = fw;
            best.argmax = warm_free;
        }
    } else {
        best = maximize_box(objective, family.box, opts.tol, opts.restarts, {warm_free});
    }

    Estimate est;
    est.method = EstimatorKind::MLE;
    est.free = best.argmax;
    const auto theta = family_to_theta(family, best.argmax);
    est.a_hat = theta.a;
    est.p_hat = theta.p;
    est.criterion_value = best.value;
    est.evaluations = best.evaluations + extra_evals + warm.evaluations;
    est.wall_ms = elapsed_ms(t0);
    return est;
}

double ae_invert_w(double w) {
    if (w < 0.5) throw NoSolutionError("ae: moment equation has no root (w < 1/2)");
    return 0.5 * (1.0 - std::sqrt(2.0 * w - 1.0));
}

AeEstimate ae_estimator_temkin(std::span<const int> path) {
    if (path.size() < 2 || path[0] != 0)
        throw MalformedPathError("ae: path must start at 0 and contain steps");
    int max_site = 0;
    for (int x : path) max_site = std::max(max_site, x);

    // First and second departure directions per positive site.
    std::vector<signed char> first(static_cast<std::size_t>(max_site) + 1, 0);
    std::vector<signed char> second(static_cast<std::size_t>(max_site) + 1, 0);
    std::vector<int> departures(static_cast<std::size_t>(max_site) + 1, 0);
    for (std::size_t t = 0; t + 1 < path.size(); ++t) {
        const int x = path[t];
        if (x <= 0) continue;
        const std::size_t xs = static_cast<std::size_t>(x);
        const signed char dir = (path[t + 1] > x) ? 1 : -1;
        if (departures[xs] == 0) first[xs] = dir;
        else if (departures[xs] == 1) second[xs] = dir;
        ++departures[xs];
    }

    AeEstimate est;
    for (std::size_t x = 1; x < departures.size(); ++x) {
        if (departures[x] >= 2 && first[x] == 1) {
            ++est.eligible_sites;
            if (second[x] == 1) ++est.confirming_sites;
        }
    }
    if (est.eligible_sites == 0)
        throw std::invalid_argument("ae: no site with two departures starting rightward");
    est.w_hat = static_cast<double>(est.confirming_sites) /
                static_cast<double>(est.eligible_sites);
    est.a_hat = ae_invert_w(est.w_hat);
    est.boundary = (est.w_hat == 0.5);
    return est;
}

NaiveEstimate naive_estimator(const WalkStats& stats) {
    NaiveEstimate est;
    for (std::size_t x = 1; x < stats.xi.size(); ++x) {
        if (stats.xi[x] < 1) continue;
        est.sites.push_back(static_cast<int>(x));
        est.omega_hat.push_back(static_cast<double>(stats.xi_plus[x]) /
                                static_cast<double>(stats.xi[x]));
    }
    if (est.sites.empty()) return est;
    const double unit = 1.0 / static_cast<double>(est.sites.size());
    for (double w : est.omega_hat) {
        if (w < 0.5) est.mass_below_half += unit;
        else if (w > 0.5) est.mass_above_half += unit;
        else {
            est.mass_below_half += 0.5 * unit;
            est.mass_above_half += 0.5 * unit;
        }
    }
    return est;
}

double naive_project_temkin(const NaiveEstimate& naive, const ModelFamily& family) {
    if (family.kind != FamilyKind::Temkin)
        throw std::invalid_argument("naive_project_temkin: Temkin family expected");
    if (naive.omega_hat.empty())
        throw UndefinedCriterionError("naive_project_temkin: empty mixture");
    double m2 = 0.0;
    for (double w : naive.omega_hat) m2 += w * w;
    m2 /= static_cast<double>(naive.omega_hat.size());
    // Temkin second moment: E[omega^2] = (a^2 + (1-a)^2)/2, so w = 2 m2.
    const double w = std::clamp(2.0 * m2, 0.5, 1.0);
    return family.box[0].clamp(ae_invert_w(w));
}

}  // namespace rwre
