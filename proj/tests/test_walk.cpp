#include <doctest.h>

#include <cmath>
#include <sstream>

#include "rwre/errors.hpp"
#include "rwre/rng.hpp"
#include "rwre/walk.hpp"

using namespace rwre;

namespace {

ThetaParams temkin03() { return ThetaParams::make({0.3, 0.7}, {0.5, 0.5}); }

Environment temkin_env(std::uint64_t seed, int x_max) {
    auto rng = make_engine(seed, 0);
    return sample_environment(temkin03(), x_max, rng);
}

void check_invariants(const WalkStats& s) {
    std::int64_t total_xi = 0, total_pm = 0;
    for (std::size_t x = 0; x < s.xi.size(); ++x) {
        CHECK(s.xi[x] == s.xi_plus[x] + s.xi_minus[x]);
        if (x + 1 < s.xi.size())
            CHECK(std::llabs(s.xi_minus[x + 1] - s.xi_plus[x]) <= 1);
        total_xi += s.xi[x];
        total_pm += s.xi_plus[x] + s.xi_minus[x];
    }
    CHECK(total_xi == s.n);
    CHECK(total_pm == s.n);
    CHECK(s.range_size() == static_cast<std::int64_t>(s.range_sites().size()));
}

}  // namespace

TEST_SUITE("walk") {

TEST_CASE("hand-enumerated paths") {
    // 0 -> 1 -> 0 -> 1 -> 0
    const std::vector<int> zigzag{0, 1, 0, 1, 0};
    const auto s = stats_from_path(zigzag);
    CHECK(s.n == 4);
    CHECK(s.xi[0] == 2);
    CHECK(s.xi_plus[0] == 2);
    CHECK(s.xi_minus[0] == 0);
    CHECK(s.xi[1] == 2);
    CHECK(s.xi_plus[1] == 0);
    CHECK(s.xi_minus[1] == 2);
    CHECK(s.range_size() == 1);
    CHECK(s.range_sites() == std::vector<int>{1});

    // 0 -> 1 -> 2 -> 1 -> 0
    const auto tent = stats_from_path(std::vector<int>{0, 1, 2, 1, 0});
    CHECK(tent.xi_plus[1] == 1);
    CHECK(tent.xi_minus[1] == 1);
    CHECK(tent.xi_plus[2] == 0);
    CHECK(tent.xi_minus[2] == 1);
    CHECK(tent.range_size() == 2);

    // One step: the range is empty because xi(0, 1) = 0.
    const auto one = stats_from_path(std::vector<int>{0, 1});
    CHECK(one.range_size() == 0);
    CHECK(one.xi_plus[0] == 1);
    CHECK(one.max_site == 1);
}

TEST_CASE("malformed paths are rejected") {
    CHECK_THROWS_AS(stats_from_path(std::vector<int>{0}), MalformedPathError);
    CHECK_THROWS_AS(stats_from_path(std::vector<int>{1, 2}), MalformedPathError);
    CHECK_THROWS_AS(stats_from_path(std::vector<int>{0, 2}), MalformedPathError);
    CHECK_THROWS_AS(stats_from_path(std::vector<int>{0, -1}), MalformedPathError);
}

TEST_CASE("one-step walk from the reflecting origin") {
    const auto env = temkin_env(5, 10);
    const auto result = simulate_walk(env, 1, substream_seed(5, 1), true);
    CHECK(result.path == std::vector<int>{0, 1});
    CHECK(result.stats.range_size() == 0);
    CHECK(result.stats.xi_plus[0] == 1);
}

TEST_CASE("streaming counters match the path oracle") {
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        const auto env = temkin_env(seed, 500);
        const auto result = simulate_walk(env, 50 + static_cast<std::int64_t>(seed % 90),
                                          substream_seed(seed, 1), true);
        const auto oracle = stats_from_path(result.path);
        CHECK(result.stats.n == oracle.n);
        CHECK(result.stats.max_site == oracle.max_site);
        CHECK(result.stats.xi == oracle.xi);
        CHECK(result.stats.xi_plus == oracle.xi_plus);
        CHECK(result.stats.xi_minus == oracle.xi_minus);
    }
}

TEST_CASE("walk invariants hold on simulated trajectories") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto env = temkin_env(seed + 1000, 5000);
        const auto result = simulate_walk(env, 2000, substream_seed(seed, 2));
        check_invariants(result.stats);
    }
}

TEST_CASE("determinism: same (env, n, seed) gives identical stats") {
    const auto env = temkin_env(77, 5000);
    const auto a = simulate_walk(env, 10000, 1234);
    const auto b = simulate_walk(env, 10000, 1234);
    CHECK(a.stats.xi == b.stats.xi);
    CHECK(a.stats.xi_plus == b.stats.xi_plus);
    CHECK(a.stats.xi_minus == b.stats.xi_minus);
    CHECK(a.stats.max_site == b.stats.max_site);
}

TEST_CASE("environment exhaustion raises") {
    // Strong rightward drift: the walk runs off a small window quickly.
    const Environment tiny({0.99, 0.99, 0.99}, {0, 0, 0});
    CHECK_THROWS_AS(simulate_walk(tiny, 100, 42), EnvironmentExhaustedError);
}

TEST_CASE("incremental snapshots agree with one-shot runs") {
    const auto env = temkin_env(13, 5000);
    WalkSimulator sim(env, 999);
    sim.advance_to(500);
    const auto snap500 = sim.snapshot();
    sim.advance_to(1500);
    const auto snap1500 = sim.snapshot();

    const auto once500 = simulate_walk(env, 500, 999);
    const auto once1500 = simulate_walk(env, 1500, 999);
    CHECK(snap500.xi == once500.stats.xi);
    CHECK(snap1500.xi == once1500.stats.xi);
    CHECK(snap1500.xi_plus == once1500.stats.xi_plus);
}

TEST_CASE("per-site departure frequencies track the quenched transitions") {
    const auto env = temkin_env(31, 5000);
    const auto result = simulate_walk(env, 200000, 777);
    const auto& s = result.stats;
    int well_visited = 0;
    for (std::size_t x = 1; x < s.xi.size(); ++x) {
        if (s.xi[x] < 500) continue;
        ++well_visited;
        const double ratio = static_cast<double>(s.xi_plus[x]) /
                             static_cast<double>(s.xi[x]);
        // Binomial concentration: 500+ trials put the ratio within ~0.1.
        CHECK(std::fabs(ratio - env.omega(static_cast<int>(x))) < 0.1);
    }
    CHECK(well_visited >= 3);
}

TEST_CASE("Sinai scale: walks stay within a log^2 n window") {
    const std::int64_t n = 100000;
    const double bound = 40.0 * std::log(static_cast<double>(n)) *
                         std::log(static_cast<double>(n));
    int inside = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto env = temkin_env(seed + 5000, 100000);
        const auto result = simulate_walk(env, n, substream_seed(seed, 3));
        if (result.stats.max_site <= bound) ++inside;
    }
    CHECK(inside >= 99);
}

TEST_CASE("stats csv dump") {
    const auto s = stats_from_path(std::vector<int>{0, 1, 0, 1, 0});
    std::ostringstream out;
    write_stats_csv(s, out);
    CHECK(out.str() == "x,xi,xi_plus,xi_minus\n0,2,2,0\n1,2,0,2\n");
}

}  // TEST_SUITE
