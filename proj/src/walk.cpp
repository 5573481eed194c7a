#include "rwre/walk.hpp"

#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "rwre/errors.hpp"
#include "rwre/rng.hpp"

namespace rwre {

std::vector<int> WalkStats::range_sites() const {
    std::vector<int> sites;
    for (std::size_t x = 1; x < xi.size(); ++x) {
        if (xi[x] >= 1) sites.push_back(static_cast<int>(x));
    }
    return sites;
}

std::int64_t WalkStats::range_size() const {
    std::int64_t r = 0;
    for (std::size_t x = 1; x < xi.size(); ++x) r += (xi[x] >= 1);
    return r;
}

WalkSimulator::WalkSimulator(const Environment& env, std::uint64_t seed, bool record_path)
    : env_(env), rng_(seed), record_path_(record_path) {
    xi_.assign(1, 0);
    xi_plus_.assign(1, 0);
    xi_minus_.assign(1, 0);
    if (record_path_) path_.push_back(0);
}

void WalkSimulator::advance_to(std::int64_t n) {
    if (n < t_) throw std::invalid_argument("WalkSimulator: cannot rewind");
    while (t_ < n) {
        const std::size_t x = static_cast<std::size_t>(pos_);
        if (x >= xi_.size()) {
            xi_.resize(x + 1, 0);
            xi_plus_.resize(x + 1, 0);
            xi_minus_.resize(x + 1, 0);
        }
        bool right;
        if (pos_ == 0) {
            right = true;  // reflection at 0
        } else {
            right = uniform01(rng_) < env_.omega(pos_);
        }
        if (right && pos_ + 1 > env_.x_max())
            throw EnvironmentExhaustedError("walk stepped past the environment window");
        ++xi_[x];
        if (right) {
            ++xi_plus_[x];
            ++pos_;
        } else {
            ++xi_minus_[x];
            --pos_;
        }
        ++t_;
        if (pos_ > max_site_) max_site_ = pos_;
        if (record_path_) path_.push_back(pos_);
    }
}

WalkStats WalkSimulator::snapshot() const {
    WalkStats s;
    s.n = t_;
    s.xi = xi_;
    s.xi_plus = xi_plus_;
    s.xi_minus = xi_minus_;
    s.max_site = max_site_;
    const std::size_t want = static_cast<std::size_t>(max_site_) + 1;
    s.xi.resize(want, 0);
    s.xi_plus.resize(want, 0);
    s.xi_minus.resize(want, 0);
    return s;
}

WalkResult simulate_walk(const Environment& env, std::int64_t n, std::uint64_t seed,
                         bool record_path) {
    if (n < 1) throw std::invalid_argument("simulate_walk: n must be >= 1");
    WalkSimulator sim(env, seed, record_path);
    sim.advance_to(n);
    return WalkResult{sim.snapshot(), sim.path()};
}

WalkStats stats_from_path(std::span<const int> path) {
    if (path.size() < 2) throw MalformedPathError("path must contain at least one step");
    if (path[0] != 0) throw MalformedPathError("path must start at 0");
    int max_site = 0;
    for (std::size_t t = 0; t < path.size(); ++t) {
        if (path[t] < 0) throw MalformedPathError("path left the nonnegative axis");
        if (t > 0 && std::abs(path[t] - path[t - 1]) != 1)
            throw MalformedPathError("path has a non-nearest-neighbour step");
        if (path[t] > max_site) max_site = path[t];
    }
    WalkStats s;
    s.n = static_cast<std::int64_t>(path.size()) - 1;
    s.max_site = max_site;
    s.xi.assign(static_cast<std::size_t>(max_site) + 1, 0);
    s.xi_plus.assign(static_cast<std::size_t>(max_site) + 1, 0);
    s.xi_minus.assign(static_cast<std::size_t>(max_site) + 1, 0);
    for (std::size_t t = 0; t + 1 < path.size(); ++t) {
        const std::size_t x = static_cast<std::size_t>(path[t]);
        ++s.xi[x];
        if (path[t + 1] > path[t]) ++s.xi_plus[x];
        else ++s.xi_minus[x];
    }
    return s;
}

void write_stats_csv(const WalkStats& stats, std::ostream& out) {
    out << "x,xi,xi_plus,xi_minus\n";
    char buf[128];
    for (std::size_t x = 0; x < stats.xi.size(); ++x) {
        std::snprintf(buf, sizeof(buf), "%zu,%lld,%lld,%lld\n", x,
                      static_cast<long long>(stats.xi[x]),
                      static_cast<long long>(stats.xi_plus[x]),
                      static_cast<long long>(stats.xi_minus[x]));
        out << buf;
    }
}

}  // namespace rwre
