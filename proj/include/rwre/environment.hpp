#pragma once

#include <iosfwd>
#include <random>
#include <vector>

#include "rwre/model.hpp"

namespace rwre {

// One sampled environment on sites {1, ..., x_max}. Site 0 is reflecting and
// carries no omega value. omega(x) is always exactly one atom of the
// generating theta; atom(x) gives its index.
class Environment {
  public:
    Environment(std::vector<double> omega, std::vector<int> atom_index);

    int x_max() const { return static_cast<int>(omega_.size()); }
    double omega(int x) const { return omega_[check(x)]; }
    int atom(int x) const { return atom_index_[check(x)]; }

    const std::vector<double>& omegas() const { return omega_; }
    const std::vector<int>& atom_indices() const { return atom_index_; }

  private:
    std::size_t check(int x) const;
    std::vector<double> omega_;
    std::vector<int> atom_index_;
};

// Potential landscape V: v[0] = 0, v[x] = sum_{y<=x} log((1-omega_y)/omega_y).
struct PotentialProfile {
    std::vector<double> v;
    int x_max() const { return static_cast<int>(v.size()) - 1; }
};

// i.i.d. draw of omega_x from eta_theta for x = 1..x_max. Deterministic given
// (theta, x_max, engine state).
Environment sample_environment(const ThetaParams& theta, int x_max, std::mt19937_64& rng);

PotentialProfile potential(const Environment& env);

// mu(x) = exp(-V(x-1)) + exp(-V(x)), the reversible measure of the quenched chain.
double reversible_measure(const PotentialProfile& prof, int x);

// Two-column debug table: header "x,omega", then one row per site.
void write_environment_csv(const Environment& env, std::ostream& out);

}  // namespace rwre
