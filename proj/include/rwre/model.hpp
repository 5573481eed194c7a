#pragma once

#include <span>
#include <string>
#include <vector>

namespace rwre {

// Environment-distribution parameters: eta = sum_i p[i] * delta_{a[i]} with an
// ordered support a and probability vector p. eps0 is the separation margin
// satisfied by this theta: a[0] >= eps0, 1-a[d-1] >= eps0, gaps >= eps0,
// p[i] >= eps0.
struct ThetaParams {
    std::vector<double> a;
    std::vector<double> p;
    double eps0 = 0.02;

    int d() const { return static_cast<int>(a.size()); }

    // Throws std::domain_error if any invariant fails.
    void validate() const;

    // Constructs and validates; eps0 is clamped down to the margins actually
    // achieved by (a, p), never above the requested value.
    static ThetaParams make(std::vector<double> a, std::vector<double> p,
                            double eps0 = 0.02);
};

enum class FamilyKind { Temkin, TwoPoint, LazyTemkin, GeneralRecurrent };

std::string family_name(FamilyKind kind);
FamilyKind family_from_name(const std::string& name);

struct Interval {
    double lo = 0.0;
    double hi = 1.0;
    bool contains(double x) const { return x >= lo && x <= hi; }
    double clamp(double x) const { return x < lo ? lo : (x > hi ? hi : x); }
    double width() const { return hi - lo; }
};

// A parametric family of recurrent environments. `box` bounds the free
// parameters; every admissible free vector maps to a recurrent ThetaParams.
//
//   Temkin           free = (a)           a = (a, 1-a),       p = (1/2, 1/2)
//   TwoPoint         free = (a1, a2)      p solves the recurrence constraint
//   LazyTemkin       free = (a, r)        a = (a, 1/2, 1-a),  p = ((1-r)/2, r, (1-r)/2)
//   GeneralRecurrent free = (a_1..a_d, p_1..p_{d-1}); p_d normalizes; inputs
//                    violating the recurrence constraint are rejected (d >= 2)
struct ModelFamily {
    FamilyKind kind = FamilyKind::Temkin;
    std::vector<Interval> box;
    double eps0 = 0.02;
    int atoms = 2;  // d

    static ModelFamily temkin(double eps0 = 0.02);
    static ModelFamily two_point(double eps0 = 0.02);
    static ModelFamily lazy_temkin(double eps0 = 0.02);
    static ModelFamily general_recurrent(std::vector<Interval> a_box,
                                         std::vector<Interval> p_box,
                                         double eps0 = 0.02);

    std::size_t free_dim() const { return box.size(); }
    std::vector<std::string> param_names() const;

    // The sub-box of free coordinates that determine the support, and the map
    // from those coordinates to the ordered atom vector. Used by the MPLE,
    // whose first stage optimizes over the support only.
    std::size_t support_dim() const;
    std::vector<Interval> support_box() const;
    std::vector<double> support_atoms(std::span<const double> support_free) const;
};

// sum_i p_i log((1-a_i)/a_i); zero iff the environment is recurrent.
double recurrence_defect(std::span<const double> a, std::span<const double> p);

// Maps a free-parameter vector inside the family box to a full ThetaParams.
ThetaParams family_to_theta(const ModelFamily& family, std::span<const double> free);

// Boltzmann entropy H(q) = -[q log q + (1-q) log(1-q)] on (0,1).
double entropy(double q);
// Multinomial entropy; zero entries contribute 0.
double entropy_vec(std::span<const double> q);

// Kullback-Leibler distance d(q|q2) on (0,1) x (0,1).
double kl(double q, double q2);
// Multinomial KL; zero entries of q contribute 0, q2 entries must be > 0.
double kl_vec(std::span<const double> q, std::span<const double> q2);

}  // namespace rwre
