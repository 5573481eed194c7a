#include <doctest.h>

#include <cmath>
#include <sstream>

#include "rwre/environment.hpp"
#include "rwre/rng.hpp"

using namespace rwre;

namespace {

ThetaParams temkin03() { return ThetaParams::make({0.3, 0.7}, {0.5, 0.5}); }

}  // namespace

TEST_SUITE("environment") {

TEST_CASE("sampling frequencies concentrate at the mixture weights") {
    auto rng = make_engine(7, 0);
    const auto env = sample_environment(temkin03(), 100000, rng);
    long count_low = 0;
    for (int x = 1; x <= env.x_max(); ++x) count_low += (env.atom(x) == 0);
    const double freq = static_cast<double>(count_low) / env.x_max();
    CHECK(freq > 0.49);
    CHECK(freq < 0.51);

    auto rng2 = make_engine(7, 1);
    const auto lazy = ThetaParams::make({0.3, 0.5, 0.7}, {0.4, 0.2, 0.4});
    const auto env2 = sample_environment(lazy, 100000, rng2);
    long count_half = 0;
    for (int x = 1; x <= env2.x_max(); ++x) count_half += (env2.atom(x) == 1);
    const double freq_half = static_cast<double>(count_half) / env2.x_max();
    CHECK(std::fabs(freq_half - 0.2) < 0.01);
}

TEST_CASE("single-site window") {
    auto rng = make_engine(3, 0);
    const auto env = sample_environment(temkin03(), 1, rng);
    CHECK(env.x_max() == 1);
    const double w = env.omega(1);
    CHECK((w == 0.3 || w == 0.7));
    CHECK_THROWS_AS(env.omega(2), std::out_of_range);
}

TEST_CASE("sampling reproducibility is bit-exact") {
    auto rng_a = make_engine(99, 4);
    auto rng_b = make_engine(99, 4);
    const auto a = sample_environment(temkin03(), 5000, rng_a);
    const auto b = sample_environment(temkin03(), 5000, rng_b);
    CHECK(a.omegas() == b.omegas());
    CHECK(a.atom_indices() == b.atom_indices());
}

TEST_CASE("potential: frozen values and prefix-sum property") {
    const Environment env({0.3, 0.3, 0.7}, {0, 0, 1});
    const auto prof = potential(env);
    REQUIRE(prof.v.size() == 4);
    CHECK(prof.v[0] == 0.0);
    CHECK(prof.v[1] == doctest::Approx(0.8472978603872036).epsilon(1e-12));
    CHECK(prof.v[2] == doctest::Approx(1.6945957207744073).epsilon(1e-12));
    CHECK(prof.v[3] == doctest::Approx(0.8472978603872036).epsilon(1e-12));

    const Environment flat({0.5, 0.5, 0.5, 0.5}, {0, 0, 0, 0});
    for (double v : potential(flat).v) CHECK(v == 0.0);

    const Environment one({0.7}, {1});
    CHECK(potential(one).v[1] == doctest::Approx(-0.8472978603872036).epsilon(1e-12));

    auto rng = make_engine(11, 0);
    const auto sampled = sample_environment(temkin03(), 2000, rng);
    const auto sp = potential(sampled);
    for (int x = 1; x <= sampled.x_max(); ++x) {
        const double inc = std::log((1.0 - sampled.omega(x)) / sampled.omega(x));
        CHECK(std::fabs(sp.v[x] - sp.v[x - 1] - inc) < 1e-12);
    }
}

TEST_CASE("reversible measure") {
    PotentialProfile flat;
    flat.v = {0.0, 0.0, 0.0};
    CHECK(reversible_measure(flat, 1) == doctest::Approx(2.0));
    CHECK(reversible_measure(flat, 2) == doctest::Approx(2.0));

    PotentialProfile up;
    up.v = {0.0, 0.8472978603872036};
    CHECK(reversible_measure(up, 1) == doctest::Approx(1.4285714285714286).epsilon(1e-12));

    PotentialProfile down;
    down.v = {0.0, -0.8472978603872036};
    CHECK(reversible_measure(down, 1) == doctest::Approx(10.0 / 3.0).epsilon(1e-12));

    CHECK_THROWS_AS(reversible_measure(flat, 0), std::out_of_range);
    CHECK_THROWS_AS(reversible_measure(flat, 3), std::out_of_range);
}

TEST_CASE("environment csv dump") {
    const Environment env({0.3, 0.7}, {0, 1});
    std::ostringstream out;
    write_environment_csv(env, out);
    CHECK(out.str() == "x,omega\n1,0.29999999999999999\n2,0.69999999999999996\n");
}

}  // TEST_SUITE
