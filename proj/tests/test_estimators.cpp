#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "rwre/environment.hpp"
#include "rwre/errors.hpp"
#include "rwre/estimators.hpp"
#include "rwre/rng.hpp"

using namespace rwre;

namespace {

ThetaParams temkin03() { return ThetaParams::make({0.3, 0.7}, {0.5, 0.5}); }

WalkResult temkin_walk(std::uint64_t seed, std::int64_t n, bool path = false) {
    auto env_rng = make_engine(seed, 0);
    const auto env = sample_environment(temkin03(), 100000, env_rng);
    return simulate_walk(env, n, substream_seed(seed, 1), path);
}

WalkStats empty_stats() {
    WalkStats s;
    s.n = 1;
    s.xi = {1, 0};
    s.xi_plus = {1, 0};
    s.xi_minus = {0, 0};
    s.max_site = 1;
    return s;
}

}  // namespace

TEST_SUITE("estimators") {

TEST_CASE("mple on a Temkin walk recovers the support scale") {
    const auto family = ModelFamily::temkin();
    const auto stats = temkin_walk(11, 100000).stats;
    const auto est = mple(stats, family);
    CHECK(est.free.size() == 1);
    CHECK(std::fabs(est.free[0] - 0.3) < 0.05);
    CHECK(est.a_hat[0] == est.free[0]);
    CHECK(est.a_hat[1] == 1.0 - est.free[0]);
    // p_bar from counts sums to one exactly.
    double sum = 0.0;
    for (double p : est.p_hat) sum += p;
    CHECK(sum == 1.0);
}

TEST_CASE("mple error accuracy improves with n in the median") {
    const auto family = ModelFamily::temkin();
    std::vector<double> err_small, err_big;
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        auto env_rng = make_engine(seed + 70, 0);
        const auto env = sample_environment(temkin03(), 100000, env_rng);
        WalkSimulator sim(env, substream_seed(seed + 70, 1));
        sim.advance_to(10000);
        err_small.push_back(
            std::fabs(mple(sim.snapshot(), family).free[0] - 0.3));
        sim.advance_to(100000);
        err_big.push_back(std::fabs(mple(sim.snapshot(), family).free[0] - 0.3));
    }
    auto median = [](std::vector<double> v) {
        std::sort(v.begin(), v.end());
        return v[v.size() / 2];
    };
    CHECK(median(err_big) < median(err_small));
}

TEST_CASE("mple with all mass on one balanced site pushes a to the box edge") {
    // Single site, xi+ = xi-: L is maximized by the admissible a closest to 1/2.
    WalkStats stats;
    stats.n = 8;
    stats.xi = {0, 8};
    stats.xi_plus = {0, 4};
    stats.xi_minus = {0, 4};
    stats.max_site = 1;
    const auto family = ModelFamily::temkin();
    const auto est = mple(stats, family);
    CHECK(std::fabs(est.free[0] - family.box[0].hi) < 1e-5);
}

TEST_CASE("mple audit grid: the returned support beats a 50-point sweep") {
    const auto family = ModelFamily::temkin();
    const auto stats = temkin_walk(23, 30000).stats;
    const auto est = mple(stats, family);
    for (int k = 0; k < 50; ++k) {
        const double a =
            family.box[0].lo + family.box[0].width() * (k + 0.5) / 50.0;
        const double value =
            pseudo_likelihood_L(family.support_atoms(std::vector<double>{a}), stats);
        CHECK(est.criterion_value >= value - 1e-12);
    }
}

TEST_CASE("mple rejects an empty range") {
    CHECK_THROWS_AS(mple(empty_stats(), ModelFamily::temkin()),
                    UndefinedCriterionError);
    CHECK_THROWS_AS(mle(empty_stats(), ModelFamily::temkin()),
                    UndefinedCriterionError);
}

TEST_CASE("mple reports the lazy-Temkin r as the mass on the middle atom") {
    const auto family = ModelFamily::lazy_temkin();
    const auto theta = family_to_theta(family, std::vector<double>{0.3, 0.2});
    auto env_rng = make_engine(5, 0);
    const auto env = sample_environment(theta, 100000, env_rng);
    const auto stats = simulate_walk(env, 100000, substream_seed(5, 1)).stats;
    const auto est = mple(stats, family);
    CHECK(est.free.size() == 2);
    CHECK(est.free[1] == doctest::Approx(est.p_hat[1]).epsilon(1e-12));
    CHECK(std::fabs(est.free[0] - 0.3) < 0.08);
}

TEST_CASE("mple recovers a two-point support") {
    const auto family = ModelFamily::two_point();
    const auto theta = family_to_theta(family, std::vector<double>{0.4, 0.7});
    auto env_rng = make_engine(29, 0);
    const auto env = sample_environment(theta, 100000, env_rng);
    const auto stats = simulate_walk(env, 100000, substream_seed(29, 1)).stats;
    const auto est = mple(stats, family);
    REQUIRE(est.free.size() == 2);
    CHECK(std::fabs(est.free[0] - 0.4) < 0.08);
    CHECK(std::fabs(est.free[1] - 0.7) < 0.08);

    const auto full = mle(stats, family);
    CHECK(std::fabs(full.free[0] - 0.4) < 0.08);
    CHECK(std::fabs(full.free[1] - 0.7) < 0.08);
    const auto warm_theta = family_to_theta(
        family, std::vector<double>{family.box[0].clamp(est.free[0]),
                                    family.box[1].clamp(est.free[1])});
    CHECK(full.criterion_value >= log_likelihood(warm_theta, stats) - 1e-9);
}

TEST_CASE("mle stays close to mple and beats its warm start") {
    const auto family = ModelFamily::temkin();
    for (std::uint64_t seed = 31; seed < 41; ++seed) {
        const auto stats = temkin_walk(seed, 100000).stats;
        const auto pseudo = mple(stats, family);
        const auto full = mle(stats, family);
        CHECK(std::fabs(full.free[0] - pseudo.free[0]) < 0.05);
        const auto warm_theta = family_to_theta(family, pseudo.free);
        CHECK(full.criterion_value >= log_likelihood(warm_theta, stats) - 1e-9);
    }
}

TEST_CASE("mle closed form for the degenerate single-atom family") {
    auto gen = ModelFamily::general_recurrent({{0.05, 0.95}}, {});
    WalkStats stats;
    stats.n = 10;
    stats.xi = {0, 10};
    stats.xi_plus = {0, 3};
    stats.xi_minus = {0, 7};
    stats.max_site = 1;
    const auto est = mle(stats, gen);
    CHECK(std::fabs(est.free[0] - 0.3) < 1e-5);  // xi+/(xi+ + xi-)

    // Clipped when the Bernoulli ratio leaves the box.
    stats.xi_plus = {0, 10};
    stats.xi_minus = {0, 0};
    const auto clipped = mle(stats, gen);
    CHECK(std::fabs(clipped.free[0] - 0.95) < 1e-5);
}

TEST_CASE("mle for a genuine d-point general family is unsupported") {
    auto gen = ModelFamily::general_recurrent({{0.05, 0.45}, {0.55, 0.95}},
                                              {{0.05, 0.95}});
    WalkStats stats = empty_stats();
    stats.xi[1] = 2;
    stats.xi_plus[1] = 1;
    stats.xi_minus[1] = 1;
    CHECK_THROWS_AS(mle(stats, gen), ConstraintError);
}

TEST_CASE("ae inversion: frozen points and the round trip") {
    CHECK(ae_invert_w(0.58) == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(ae_invert_w(0.5) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK_THROWS_AS(ae_invert_w(0.4), NoSolutionError);
    for (int k = 0; k <= 40; ++k) {
        const double a = 0.05 + k * 0.01;
        const double w = a * a + (1.0 - a) * (1.0 - a);
        CHECK(ae_invert_w(w) == doctest::Approx(a).epsilon(1e-12));
    }
}

TEST_CASE("ae estimator on hand-built paths") {
    // Site 1: first departure right (t=1), second departure right (t=3).
    const std::vector<int> two_up{0, 1, 2, 1, 2, 1, 0, 1, 0};
    const auto est = ae_estimator_temkin(two_up);
    CHECK(est.eligible_sites == 1);
    CHECK(est.confirming_sites == 1);
    CHECK(est.w_hat == 1.0);
    CHECK(est.a_hat == doctest::Approx(0.0).epsilon(1e-12));

    // Site 1 departs right then left: w = 0 -> no solution.
    const std::vector<int> up_down{0, 1, 2, 1, 0, 1, 0};
    CHECK_THROWS_AS(ae_estimator_temkin(up_down), NoSolutionError);

    // No site with two departures starting rightward.
    CHECK_THROWS_AS(ae_estimator_temkin(std::vector<int>{0, 1, 0}),
                    std::invalid_argument);
}

TEST_CASE("ae estimate lands near the truth at large n") {
    const auto result = temkin_walk(3, 100000, true);
    const auto est = ae_estimator_temkin(result.path);
    CHECK(est.eligible_sites > 10);
    CHECK(std::fabs(est.a_hat - 0.3) < 0.2);
}

TEST_CASE("naive estimator: ratios and mixture masses") {
    WalkStats stats;
    stats.n = 4;
    stats.xi = {0, 4};
    stats.xi_plus = {0, 3};
    stats.xi_minus = {0, 1};
    stats.max_site = 1;
    const auto est = naive_estimator(stats);
    CHECK(est.omega_hat == std::vector<double>{0.75});
    CHECK(est.mass_above_half == 1.0);

    const auto empty = naive_estimator(empty_stats());
    CHECK(empty.sites.empty());
}

TEST_CASE("naive mixture splits evenly around 1/2 at large n") {
    const auto result = temkin_walk(17, 1000000);
    const auto est = naive_estimator(result.stats);
    CHECK(std::fabs(est.mass_below_half - 0.5) < 0.1);
    CHECK(std::fabs(est.mass_above_half - 0.5) < 0.1);
    const double a_proj = naive_project_temkin(est, ModelFamily::temkin());
    CHECK(a_proj > 0.0);
    CHECK(a_proj < 0.5);
}

}  // TEST_SUITE
