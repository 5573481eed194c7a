#include "rwre/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rwre/errors.hpp"

namespace rwre {

namespace {

constexpr double kRecurrenceTol = 1e-10;
constexpr double kProbSumTol = 1e-12;

void check_open_unit(std::span<const double> v, const char* what) {
    for (double x : v) {
        if (!(x > 0.0 && x < 1.0))
            throw std::domain_error(std::string(what) + " entry outside (0,1)");
    }
}

// Probabilities may sit at 1 exactly: the d = 1 degenerate family has p = (1).
void check_prob_entries(std::span<const double> v) {
    for (double x : v) {
        if (!(x > 0.0 && x <= 1.0))
            throw std::domain_error("ThetaParams probabilities entry outside (0,1]");
    }
}

}  // namespace

void ThetaParams::validate() const {
    if (a.empty() || a.size() != p.size())
        throw std::domain_error("ThetaParams: a and p must be nonempty and equal length");
    check_open_unit(a, "ThetaParams support");
    check_prob_entries(p);
    const int n = d();
    if (!(eps0 > 0.0 && eps0 < 1.0 / (2.0 * n)))
        throw std::domain_error("ThetaParams: eps0 outside (0, 1/(2d))");
    if (a.front() < eps0 || 1.0 - a.back() < eps0)
        throw std::domain_error("ThetaParams: support too close to {0,1} for eps0");
    for (int i = 0; i + 1 < n; ++i) {
        if (a[i + 1] - a[i] < eps0)
            throw std::domain_error("ThetaParams: support gap below eps0");
    }
    double sum = 0.0;
    for (double pi : p) {
        if (pi < eps0) throw std::domain_error("ThetaParams: probability below eps0");
        sum += pi;
    }
    if (std::fabs(sum - 1.0) > kProbSumTol)
        throw std::domain_error("ThetaParams: probabilities do not sum to 1");
}

ThetaParams ThetaParams::make(std::vector<double> a, std::vector<double> p, double eps0) {
    ThetaParams theta{std::move(a), std::move(p), eps0};
    if (theta.a.empty() || theta.a.size() != theta.p.size())
        throw std::domain_error("ThetaParams: a and p must be nonempty and equal length");
    check_open_unit(theta.a, "ThetaParams support");
    check_prob_entries(theta.p);
    // eps0 may not exceed the margins this (a,p) actually achieves.
    double margin = std::min(theta.a.front(), 1.0 - theta.a.back());
    for (std::size_t i = 0; i + 1 < theta.a.size(); ++i)
        margin = std::min(margin, theta.a[i + 1] - theta.a[i]);
    for (double pi : theta.p) margin = std::min(margin, pi);
    if (margin <= 0.0) throw std::domain_error("ThetaParams: margins not positive");
    const double cap = 1.0 / (2.0 * theta.d());
    theta.eps0 = std::min({eps0, margin, std::nextafter(cap, 0.0)});
    theta.validate();
    return theta;
}

std::string family_name(FamilyKind kind) {
    switch (kind) {
        case FamilyKind::Temkin: return "temkin";
        case FamilyKind::TwoPoint: return "two_point";
        case FamilyKind::LazyTemkin: return "lazy_temkin";
        case FamilyKind::GeneralRecurrent: return "general";
    }
    return "unknown";
}

FamilyKind family_from_name(const std::string& name) {
    if (name == "temkin") return FamilyKind::Temkin;
    if (name == "two_point") return FamilyKind::TwoPoint;
    if (name == "lazy_temkin") return FamilyKind::LazyTemkin;
    if (name == "general") return FamilyKind::GeneralRecurrent;
    throw std::invalid_argument("unknown family: " + name);
}

ModelFamily ModelFamily::temkin(double eps0) {
    return ModelFamily{FamilyKind::Temkin, {{eps0, 0.5 - eps0}}, eps0, 2};
}

ModelFamily ModelFamily::two_point(double eps0) {
    return ModelFamily{FamilyKind::TwoPoint,
                       {{eps0, 0.5 - eps0}, {0.5 + eps0, 1.0 - eps0}},
                       eps0,
                       2};
}

ModelFamily ModelFamily::lazy_temkin(double eps0) {
    return ModelFamily{FamilyKind::LazyTemkin,
                       {{eps0, 0.5 - eps0}, {eps0, 1.0 - 2.0 * eps0}},
                       eps0,
                       3};
}

ModelFamily ModelFamily::general_recurrent(std::vector<Interval> a_box,
                                           std::vector<Interval> p_box,
                                           double eps0) {
    if (a_box.empty()) throw std::invalid_argument("general_recurrent: empty support box");
    if (p_box.size() + 1 != a_box.size() && !(a_box.size() == 1 && p_box.empty()))
        throw std::invalid_argument("general_recurrent: need d-1 probability intervals");
    ModelFamily fam;
    fam.kind = FamilyKind::GeneralRecurrent;
    fam.eps0 = eps0;
    fam.atoms = static_cast<int>(a_box.size());
    fam.box = std::move(a_box);
    fam.box.insert(fam.box.end(), p_box.begin(), p_box.end());
    return fam;
}

std::vector<std::string> ModelFamily::param_names() const {
    switch (kind) {
        case FamilyKind::Temkin: return {"a"};
        case FamilyKind::TwoPoint: return {"a1", "a2"};
        case FamilyKind::LazyTemkin: return {"a", "r"};
        case FamilyKind::GeneralRecurrent: {
            std::vector<std::string> names;
            for (int i = 0; i < atoms; ++i) names.push_back("a" + std::to_string(i + 1));
            for (int i = 0; i + 1 < atoms; ++i) names.push_back("p" + std::to_string(i + 1));
            return names;
        }
    }
    return {};
}

std::size_t ModelFamily::support_dim() const {
    switch (kind) {
        case FamilyKind::Temkin: return 1;
        case FamilyKind::TwoPoint: return 2;
        case FamilyKind::LazyTemkin: return 1;
        case FamilyKind::GeneralRecurrent: return static_cast<std::size_t>(atoms);
    }
    return 0;
}

std::vector<Interval> ModelFamily::support_box() const {
    return {box.begin(), box.begin() + static_cast<std::ptrdiff_t>(support_dim())};
}

std::vector<double> ModelFamily::support_atoms(std::span<const double> s) const {
    if (s.size() != support_dim())
        throw std::invalid_argument("support_atoms: wrong dimension");
    switch (kind) {
        case FamilyKind::Temkin: return {s[0], 1.0 - s[0]};
        case FamilyKind::TwoPoint: return {s[0], s[1]};
        case FamilyKind::LazyTemkin: return {s[0], 0.5, 1.0 - s[0]};
        case FamilyKind::GeneralRecurrent: return {s.begin(), s.end()};
    }
    return {};
}

double recurrence_defect(std::span<const double> a, std::span<const double> p) {
    if (a.empty() || a.size() != p.size())
        throw std::domain_error("recurrence_defect: need equal-length nonempty vectors");
    check_open_unit(a, "recurrence_defect support");
    check_open_unit(p, "recurrence_defect probabilities");
    double defect = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        defect += p[i] * std::log((1.0 - a[i]) / a[i]);
    return defect;
}

ThetaParams family_to_theta(const ModelFamily& family, std::span<const double> free) {
    if (free.size() != family.free_dim())
        throw std::domain_error("family_to_theta: free vector has wrong dimension");
    for (std::size_t i = 0; i < free.size(); ++i) {
        if (!family.box[i].contains(free[i]))
            throw std::domain_error("family_to_theta: free parameter outside box");
    }
    switch (family.kind) {
        case FamilyKind::Temkin: {
            const double a = free[0];
            return ThetaParams::make({a, 1.0 - a}, {0.5, 0.5}, family.eps0);
        }
        case FamilyKind::TwoPoint: {
            const double a1 = free[0], a2 = free[1];
            if (!(a1 < 0.5 && 0.5 < a2))
                throw std::domain_error("family_to_theta: two-point needs a1 < 1/2 < a2");
            // p chosen so that p1 log((1-a1)/a1) + p2 log((1-a2)/a2) = 0.
            const double A = std::log((1.0 - a1) / a1);
            const double B = std::log(a2 / (1.0 - a2));
            return ThetaParams::make({a1, a2}, {B / (A + B), A / (A + B)}, family.eps0);
        }
        case FamilyKind::LazyTemkin: {
            const double a = free[0], r = free[1];
            return ThetaParams::make({a, 0.5, 1.0 - a},
                                     {0.5 * (1.0 - r), r, 0.5 * (1.0 - r)}, family.eps0);
        }
        case FamilyKind::GeneralRecurrent: {
            const int d = family.atoms;
            std::vector<double> a(free.begin(), free.begin() + d);
            for (int i = 0; i + 1 < d; ++i) {
                if (a[i + 1] <= a[i])
                    throw std::domain_error("family_to_theta: support not increasing");
            }
            std::vector<double> p(free.begin() + d, free.end());
            double tail = 1.0;
            for (double pi : p) tail -= pi;
            p.push_back(tail);
            auto theta = ThetaParams::make(std::move(a), std::move(p), family.eps0);
            // d = 1 is a degenerate Bernoulli device used by tests; the
            // recurrence constraint only applies to genuine mixtures.
            if (d >= 2 && std::fabs(recurrence_defect(theta.a, theta.p)) > kRecurrenceTol)
                throw ConstraintError("family_to_theta: environment not recurrent");
            return theta;
        }
    }
    throw std::logic_error("family_to_theta: unreachable");
}

double entropy(double q) {
    if (!(q > 0.0 && q < 1.0)) throw std::domain_error("entropy: q outside (0,1)");
    return -(q * std::log(q) + (1.0 - q) * std::log(1.0 - q));
}

double entropy_vec(std::span<const double> q) {
    double h = 0.0;
    for (double qi : q) {
        if (qi < 0.0 || qi > 1.0) throw std::domain_error("entropy_vec: entry outside [0,1]");
        if (qi > 0.0) h -= qi * std::log(qi);
    }
    return h;
}

double kl(double q, double q2) {
    if (!(q > 0.0 && q < 1.0) || !(q2 > 0.0 && q2 < 1.0))
        throw std::domain_error("kl: arguments outside (0,1)");
    return q * std::log(q / q2) + (1.0 - q) * std::log((1.0 - q) / (1.0 - q2));
}

double kl_vec(std::span<const double> q, std::span<const double> q2) {
    if (q.size() != q2.size()) throw std::domain_error("kl_vec: length mismatch");
    double dkl = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) {
        if (!(q2[i] > 0.0)) throw std::domain_error("kl_vec: q2 entry not positive");
        if (q[i] < 0.0) throw std::domain_error("kl_vec: q entry negative");
        if (q[i] > 0.0) dkl += q[i] * std::log(q[i] / q2[i]);
    }
    return dkl;
}

}  // namespace rwre
