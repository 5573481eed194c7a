#include "rwre/environment.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "rwre/rng.hpp"

namespace rwre {

Environment::Environment(std::vector<double> omega, std::vector<int> atom_index)
    : omega_(std::move(omega)), atom_index_(std::move(atom_index)) {
    if (omega_.empty() || omega_.size() != atom_index_.size())
        throw std::invalid_argument("Environment: omega/atom_index size mismatch");
    for (double w : omega_) {
        if (!(w > 0.0 && w < 1.0))
            throw std::invalid_argument("Environment: omega outside (0,1)");
    }
}

std::size_t Environment::check(int x) const {
    if (x < 1 || x > x_max()) throw std::out_of_range("Environment: site outside window");
    return static_cast<std::size_t>(x - 1);
}

Environment sample_environment(const ThetaParams& theta, int x_max, std::mt19937_64& rng) {
    if (x_max < 1) throw std::invalid_argument("sample_environment: x_max must be >= 1");
    theta.validate();
    const int d = theta.d();
    std::vector<double> cum(theta.p);
    for (int i = 1; i < d; ++i) cum[i] += cum[i - 1];
    std::vector<double> omega(static_cast<std::size_t>(x_max));
    std::vector<int> atom(static_cast<std::size_t>(x_max));
    for (int x = 0; x < x_max; ++x) {
        const double u = uniform01(rng);
        int i = 0;
        while (i + 1 < d && u >= cum[i]) ++i;
        omega[x] = theta.a[i];
        atom[x] = i;
    }
    return Environment(std::move(omega), std::move(atom));
}

PotentialProfile potential(const Environment& env) {
    PotentialProfile prof;
    prof.v.resize(static_cast<std::size_t>(env.x_max()) + 1);
    prof.v[0] = 0.0;
    for (int x = 1; x <= env.x_max(); ++x) {
        const double w = env.omega(x);
        prof.v[x] = prof.v[x - 1] + std::log((1.0 - w) / w);
    }
    return prof;
}

double reversible_measure(const PotentialProfile& prof, int x) {
    if (x < 1 || x > prof.x_max())
        throw std::out_of_range("reversible_measure: site outside window");
    return std::exp(-prof.v[x - 1]) + std::exp(-prof.v[x]);
}

void write_environment_csv(const Environment& env, std::ostream& out) {
    out << "x,omega\n";
    char buf[64];
    for (int x = 1; x <= env.x_max(); ++x) {
        std::snprintf(buf, sizeof(buf), "%d,%.17g\n", x, env.omega(x));
        out << buf;
    }
}

}  // namespace rwre
