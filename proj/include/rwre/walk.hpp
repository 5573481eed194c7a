#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <span>
#include <vector>

#include "rwre/environment.hpp"

namespace rwre {

// Local-time statistics of a finished n-step trajectory. Dense arrays over
// sites [0, max_site]:
//   xi[x]       = xi(n-1, x)  (visits at times 0..n-1)
//   xi_plus[x]  = xi+(n, x)   (right departures before time n)
//   xi_minus[x] = xi-(n, x)   (left departures before time n)
// so xi = xi_plus + xi_minus holds sitewise. The range is the set of positive
// sites with xi >= 1; max_site is max_{t<=n} X_t (final position included).
struct WalkStats {
    std::int64_t n = 0;
    std::vector<std::int64_t> xi;
    std::vector<std::int64_t> xi_plus;
    std::vector<std::int64_t> xi_minus;
    int max_site = 0;

    std::vector<int> range_sites() const;
    std::int64_t range_size() const;  // R_n
};

// Incremental simulator; lets one trajectory be inspected at several horizons.
class WalkSimulator {
  public:
    WalkSimulator(const Environment& env, std::uint64_t seed, bool record_path = false);

    // Advances to time n (n >= current time). Throws EnvironmentExhaustedError
    // if a step would leave the environment window.
    void advance_to(std::int64_t n);

    std::int64_t time() const { return t_; }
    WalkStats snapshot() const;
    const std::vector<int>& path() const { return path_; }

  private:
    const Environment& env_;
    std::mt19937_64 rng_;
    bool record_path_;
    std::int64_t t_ = 0;
    int pos_ = 0;
    int max_site_ = 0;
    std::vector<std::int64_t> xi_, xi_plus_, xi_minus_;
    std::vector<int> path_;
};

struct WalkResult {
    WalkStats stats;
    std::vector<int> path;  // empty unless recording was requested
};

// Runs the reflected quenched walk for n steps from X_0 = 0.
WalkResult simulate_walk(const Environment& env, std::int64_t n, std::uint64_t seed,
                         bool record_path = false);

// Recomputes WalkStats from an explicit path (X_0..X_n); brute-force oracle
// for the streaming counters.
WalkStats stats_from_path(std::span<const int> path);

// CSV dump: header "x,xi,xi_plus,xi_minus", one row per site in [0, max_site].
void write_stats_csv(const WalkStats& stats, std::ostream& out);

}  // namespace rwre
