#include "rwre/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rwre/errors.hpp"

namespace rwre {

namespace {

double checked_eval_1d(const std::function<double(double)>& f, double x, long& evals) {
    ++evals;
    const double v = f(x);
    if (!std::isfinite(v))
        throw EvaluationError("objective returned a non-finite value", {x});
    return v;
}

double checked_eval(const std::function<double(std::span<const double>)>& f,
                    std::span<const double> x, long& evals) {
    ++evals;
    const double v = f(x);
    if (!std::isfinite(v))
        throw EvaluationError("objective returned a non-finite value",
                              std::vector<double>(x.begin(), x.end()));
    return v;
}

// Generalized-golden-ratio (R_d) sequence: a deterministic low-discrepancy
// point set inside the unit cube, scrambled by a fixed offset.
std::vector<double> r_sequence_point(std::size_t dim, int index) {
    double phi = 1.0;
    for (int it = 0; it < 32; ++it) phi = std::pow(1.0 + phi, 1.0 / (dim + 1.0));
    std::vector<double> u(dim);
    double alpha = 1.0;
    for (std::size_t k = 0; k < dim; ++k) {
        alpha /= phi;
        u[k] = std::fmod(0.5 + alpha * (index + 1), 1.0);
    }
    return u;
}

}  // namespace

OptimResult maximize_1d(const std::function<double(double)>& f, double lo, double hi,
                        double tol, long max_eval) {
    if (!(lo < hi)) throw std::invalid_argument("maximize_1d: need lo < hi");
    if (!(tol > 0.0)) throw std::invalid_argument("maximize_1d: tol must be positive");

    long evals = 0;
    // Brent minimizes g = -f on (lo, hi).
    const double golden = 0.5 * (3.0 - std::sqrt(5.0));
    const double sqrt_eps = std::sqrt(2.2e-16);
    double a = lo, b = hi;
    double x = a + golden * (b - a);
    double w = x, v = x;
    double fx = -checked_eval_1d(f, x, evals);
    double fw = fx, fv = fx;
    double deltax = 0.0, rat = 0.0;
    bool converged = false;

    while (evals < max_eval) {
        const double xmid = 0.5 * (a + b);
        const double tol1 = sqrt_eps * std::fabs(x) + tol / 3.0;
        const double tol2 = 2.0 * tol1;
        if (std::fabs(x - xmid) <= tol2 - 0.5 * (b - a)) {
            converged = true;
            break;
        }
        bool use_golden = true;
        if (std::fabs(deltax) > tol1) {
            // Try a parabolic step through (v, w, x).
            const double r = (x - w) * (fx - fv);
            double q = (x - v) * (fx - fw);
            double p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if (q > 0.0) p = -p;
            q = std::fabs(q);
            const double dx_temp = deltax;
            deltax = rat;
            if (std::fabs(p) < std::fabs(0.5 * q * dx_temp) && p > q * (a - x) &&
                p < q * (b - x)) {
                rat = p / q;
                const double u = x + rat;
                if ((u - a) < tol2 || (b - u) < tol2)
                    rat = (xmid - x >= 0.0) ? tol1 : -tol1;
                use_golden = false;
            }
        }
        if (use_golden) {
            deltax = (x >= xmid) ? a - x : b - x;
            rat = golden * deltax;
        }
        const double u = (std::fabs(rat) >= tol1) ? x + rat
                                                  : x + (rat >= 0.0 ? tol1 : -tol1);
        const double fu = -checked_eval_1d(f, u, evals);
        if (fu <= fx) {
            if (u >= x) a = x;
            else b = x;
            v = w; w = x; x = u;
            fv = fw; fw = fx; fx = fu;
        } else {
            if (u < x) a = u;
            else b = u;
            if (fu <= fw || w == x) {
                v = w; w = u;
                fv = fw; fw = fu;
            } else if (fu <= fv || v == x || v == w) {
                v = u;
                fv = fu;
            }
        }
    }

    // Endpoints can carry the maximum of a monotone objective; check them.
    OptimResult out;
    out.argmax = {x};
    out.value = -fx;
    for (double cand : {lo, hi}) {
        if (evals >= max_eval) break;
        const double fc = checked_eval_1d(f, cand, evals);
        if (fc > out.value) {
            out.value = fc;
            out.argmax = {cand};
        }
    }
    out.evaluations = evals;
    out.converged = converged;
    return out;
}

namespace {

struct NelderMeadRun {
    std::vector<double> best;
    double best_value;  // of f (maximization)
    bool converged;
};

NelderMeadRun nelder_mead(const std::function<double(std::span<const double>)>& f,
                          std::span<const Interval> box, std::span<const double> start,
                          double tol, long max_eval, long& evals) {
    const std::size_t dim = box.size();
    auto clamp = [&](std::vector<double>& x) {
        for (std::size_t k = 0; k < dim; ++k) x[k] = box[k].clamp(x[k]);
    };

    std::vector<std::vector<double>> simplex;
    std::vector<double> x0(start.begin(), start.end());
    clamp(x0);
    simplex.push_back(x0);
    for (std::size_t k = 0; k < dim; ++k) {
        std::vector<double> xk = x0;
        const double h = 0.1 * box[k].width();
        xk[k] = (xk[k] + h <= box[k].hi) ? xk[k] + h : xk[k] - h;
        simplex.push_back(xk);
    }
    std::vector<double> fvals(simplex.size());
    for (std::size_t i = 0; i < simplex.size(); ++i)
        fvals[i] = -checked_eval(f, simplex[i], evals);

    auto order = [&]() {
        std::vector<std::size_t> idx(simplex.size());
        for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
        std::sort(idx.begin(), idx.end(),
                  [&](std::size_t i, std::size_t j) { return fvals[i] < fvals[j]; });
        std::vector<std::vector<double>> s2;
        std::vector<double> f2;
        for (std::size_t i : idx) {
            s2.push_back(simplex[i]);
            f2.push_back(fvals[i]);
        }
        simplex.swap(s2);
        fvals.swap(f2);
    };

    bool converged = false;
    while (evals < max_eval) {
        order();
        double diameter = 0.0;
        for (std::size_t i = 1; i < simplex.size(); ++i) {
            for (std::size_t k = 0; k < dim; ++k)
                diameter = std::max(diameter, std::fabs(simplex[i][k] - simplex[0][k]));
        }
        if (diameter < tol) {
            converged = true;
            break;
        }

        std::vector<double> centroid(dim, 0.0);
        for (std::size_t i = 0; i + 1 < simplex.size(); ++i) {
            for (std::size_t k = 0; k < dim; ++k) centroid[k] += simplex[i][k];
        }
        for (double& c : centroid) c /= static_cast<double>(dim);

        const std::size_t worst = simplex.size() - 1;
        auto blend = [&](double coef) {
            std::vector<double> x(dim);
            for (std::size_t k = 0; k < dim; ++k)
                x[k] = centroid[k] + coef * (centroid[k] - simplex[worst][k]);
            clamp(x);
            return x;
        };

        auto xr = blend(1.0);
        const double fr = -checked_eval(f, xr, evals);
        if (fr < fvals[0]) {
            auto xe = blend(2.0);
            const double fe = -checked_eval(f, xe, evals);
            if (fe < fr) {
                simplex[worst] = xe;
                fvals[worst] = fe;
            } else {
                simplex[worst] = xr;
                fvals[worst] = fr;
            }
        } else if (fr < fvals[worst - 1]) {
            simplex[worst] = xr;
            fvals[worst] = fr;
        } else {
            auto xc = blend(fr < fvals[worst] ? 0.5 : -0.5);
            const double fc = -checked_eval(f, xc, evals);
            if (fc < std::min(fr, fvals[worst])) {
                simplex[worst] = xc;
                fvals[worst] = fc;
            } else {
                // Shrink toward the best vertex.
                for (std::size_t i = 1; i < simplex.size(); ++i) {
                    for (std::size_t k = 0; k < dim; ++k)
                        simplex[i][k] = simplex[0][k] + 0.5 * (simplex[i][k] - simplex[0][k]);
                    clamp(simplex[i]);
                    fvals[i] = -checked_eval(f, simplex[i], evals);
                }
            }
        }
    }
    order();
    return NelderMeadRun{simplex[0], -fvals[0], converged};
}

}  // namespace

OptimResult maximize_box(const std::function<double(std::span<const double>)>& f,
                         std::span<const Interval> box, double tol, int restarts,
                         const std::vector<std::vector<double>>& warm_starts) {
    if (box.empty()) throw std::invalid_argument("maximize_box: empty box");
    if (restarts < 1) throw std::invalid_argument("maximize_box: need at least one start");
    const std::size_t dim = box.size();
    if (dim == 1 && warm_starts.empty()) {
        auto g = [&](double x) { return f(std::span<const double>(&x, 1)); };
        return maximize_1d(g, box[0].lo, box[0].hi, tol);
    }

    std::vector<std::vector<double>> starts;
    for (int j = 0; j < restarts; ++j) {
        auto u = r_sequence_point(dim, j);
        std::vector<double> x(dim);
        for (std::size_t k = 0; k < dim; ++k) x[k] = box[k].lo + u[k] * box[k].width();
        starts.push_back(std::move(x));
    }
    for (const auto& w : warm_starts) {
        if (w.size() != dim)
            throw std::invalid_argument("maximize_box: warm start has wrong dimension");
        starts.push_back(w);
    }

    const long per_run_budget = 400 * static_cast<long>(dim);
    long evals = 0;
    OptimResult out;
    bool have = false;
    bool all_converged = true;
    for (const auto& s : starts) {
        long budget = evals + per_run_budget;
        auto run = nelder_mead(f, box, s, tol, budget, evals);
        all_converged = all_converged && run.converged;
        if (!have || run.best_value > out.value) {
            out.value = run.best_value;
            out.argmax = run.best;
            have = true;
        }
    }
    out.evaluations = evals;
    out.converged = all_converged;
    return out;
}

}  // namespace rwre
