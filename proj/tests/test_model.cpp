#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "rwre/errors.hpp"
#include "rwre/model.hpp"
#include "rwre/rng.hpp"

using namespace rwre;

TEST_SUITE("model") {

TEST_CASE("recurrence defect: symmetric, solved and unbalanced supports") {
    const std::vector<double> sym_a{0.3, 0.7}, half{0.5, 0.5};
    CHECK(std::fabs(recurrence_defect(sym_a, half)) < 1e-12);

    // p1 log((1-a1)/a1) = p2 log(a2/(1-a2)) solved exactly: p1 = log(7/3)/log(3.5).
    const double p1 = std::log(7.0 / 3.0) / std::log(3.5);
    const std::vector<double> a{0.4, 0.7}, p{p1, 1.0 - p1};
    CHECK(std::fabs(recurrence_defect(a, p)) < 1e-12);
    CHECK(p1 == doctest::Approx(0.6763433160902349).epsilon(1e-12));

    CHECK(recurrence_defect(a, half) ==
          doctest::Approx(-0.22091637613951962).epsilon(1e-9));

    CHECK_THROWS_AS(recurrence_defect(std::vector<double>{0.0, 0.5}, half),
                    std::domain_error);
    CHECK_THROWS_AS(recurrence_defect(std::vector<double>{0.3, 1.0}, half),
                    std::domain_error);
}

TEST_CASE("family_to_theta: named families") {
    const auto temkin = family_to_theta(ModelFamily::temkin(), std::vector<double>{0.3});
    CHECK(temkin.a == std::vector<double>{0.3, 0.7});
    CHECK(temkin.p == std::vector<double>{0.5, 0.5});

    const auto lazy =
        family_to_theta(ModelFamily::lazy_temkin(), std::vector<double>{0.3, 0.2});
    CHECK(lazy.a == std::vector<double>{0.3, 0.5, 0.7});
    CHECK(lazy.p[0] == doctest::Approx(0.4).epsilon(1e-15));
    CHECK(lazy.p[1] == doctest::Approx(0.2).epsilon(1e-15));

    const auto two =
        family_to_theta(ModelFamily::two_point(), std::vector<double>{0.4, 0.7});
    CHECK(two.p[0] == doctest::Approx(0.6763433160902349).epsilon(1e-12));
    CHECK(two.p[1] == doctest::Approx(0.32365668390976515).epsilon(1e-12));
}

TEST_CASE("family_to_theta: box and ordering violations") {
    const auto temkin = ModelFamily::temkin();
    CHECK_THROWS_AS(family_to_theta(temkin, std::vector<double>{0.6}), std::domain_error);
    CHECK_THROWS_AS(family_to_theta(temkin, std::vector<double>{0.001}),
                    std::domain_error);

    // General family: non-recurrent input is rejected for d >= 2.
    auto gen = ModelFamily::general_recurrent({{0.05, 0.45}, {0.55, 0.95}},
                                              {{0.05, 0.95}});
    CHECK_THROWS_AS(family_to_theta(gen, std::vector<double>{0.4, 0.7, 0.5}),
                    ConstraintError);
    const double p1 = std::log(7.0 / 3.0) / std::log(3.5);
    const auto ok = family_to_theta(gen, std::vector<double>{0.4, 0.7, p1});
    CHECK(std::fabs(recurrence_defect(ok.a, ok.p)) < 1e-10);
}

TEST_CASE("entropy and kl: frozen values and domain errors") {
    CHECK(entropy(0.5) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
    CHECK(entropy(0.3) == doctest::Approx(0.6108643020548935).epsilon(1e-12));
    CHECK_THROWS_AS(entropy(0.0), std::domain_error);
    CHECK_THROWS_AS(entropy(1.0), std::domain_error);

    const std::vector<double> degenerate{1.0, 0.0, 0.0};
    CHECK(entropy_vec(degenerate) == 0.0);

    CHECK(kl(0.3, 0.3) == 0.0);
    CHECK(kl(0.3, 0.5) == doctest::Approx(0.08228287850505185).epsilon(1e-12));
    CHECK(kl(0.3, 0.5) ==
          doctest::Approx(entropy(0.5) - entropy(0.3)).epsilon(1e-12));
    CHECK_THROWS_AS(kl(0.0, 0.5), std::domain_error);
    CHECK_THROWS_AS(kl(0.5, 1.0), std::domain_error);

    const std::vector<double> q{0.5, 0.5}, q2{0.25, 0.75};
    CHECK(kl_vec(q, q2) == doctest::Approx(0.14384103622589045).epsilon(1e-12));
}

TEST_CASE("kl nonnegativity and entropy symmetry on a grid") {
    for (int i = 1; i < 100; ++i) {
        const double q = i / 100.0;
        CHECK(entropy(q) == doctest::Approx(entropy(1.0 - q)).epsilon(1e-12));
        for (int j = 1; j < 100; ++j) {
            const double q2 = j / 100.0;
            const double d = kl(q, q2);
            CHECK(d >= 0.0);
            if (i == j) CHECK(d == 0.0);
            else CHECK(d > 0.0);
        }
    }
}

TEST_CASE("theta invariants hold after every family_to_theta call") {
    std::mt19937_64 rng(make_engine(41, 0));
    auto pick = [&](const Interval& box) {
        return box.lo + uniform01(rng) * box.width();
    };
    const std::vector<ModelFamily> families{
        ModelFamily::temkin(), ModelFamily::two_point(), ModelFamily::lazy_temkin()};
    for (const auto& fam : families) {
        for (int rep = 0; rep < 200; ++rep) {
            std::vector<double> free;
            for (const auto& box : fam.box) free.push_back(pick(box));
            const auto theta = family_to_theta(fam, free);
            CHECK_NOTHROW(theta.validate());
            CHECK(std::fabs(recurrence_defect(theta.a, theta.p)) <= 1e-10);
            double sum = 0.0;
            for (double pi : theta.p) sum += pi;
            CHECK(std::fabs(sum - 1.0) < 1e-12);
        }
    }
}

TEST_CASE("general recurrent family over random supports and weights") {
    // Draw a support straddling 1/2, then solve the recurrence constraint by
    // rebalancing random masses between the drift-positive and drift-negative
    // atoms. Every accepted draw must round-trip through family_to_theta.
    std::mt19937_64 rng(make_engine(42, 7));
    int built = 0;
    for (int rep = 0; rep < 300; ++rep) {
        const int d = 2 + static_cast<int>(rng() % 3);
        std::vector<double> gaps(static_cast<std::size_t>(d) + 1);
        double gap_sum = 0.0;
        for (double& g : gaps) {
            g = uniform01(rng) + 1e-3;
            gap_sum += g;
        }
        const double margin = 0.03;
        const double scale = (1.0 - (d + 1) * margin) / gap_sum;
        std::vector<double> a(static_cast<std::size_t>(d));
        double cur = 0.0;
        for (int i = 0; i < d; ++i) {
            cur += margin + gaps[static_cast<std::size_t>(i)] * scale;
            a[static_cast<std::size_t>(i)] = cur;
        }
        std::vector<double> drift(a.size());
        double pos = 0.0, neg = 0.0;
        std::vector<double> w(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            drift[i] = std::log((1.0 - a[i]) / a[i]);
            w[i] = 0.1 + uniform01(rng);
            if (drift[i] > 0) pos += w[i] * drift[i];
            else neg -= w[i] * drift[i];
        }
        if (pos <= 0.0 || neg <= 0.0) continue;  // support on one side of 1/2
        // Scale the positive-drift masses so the mean drift cancels.
        double total = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (drift[i] > 0) w[i] *= neg / pos;
            total += w[i];
        }
        std::vector<double> p(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) p[i] = w[i] / total;
        if (*std::min_element(p.begin(), p.end()) < 1e-3) continue;

        std::vector<Interval> a_box, p_box;
        for (double ai : a) a_box.push_back({ai - 1e-9, ai + 1e-9});
        for (std::size_t i = 0; i + 1 < p.size(); ++i)
            p_box.push_back({p[i] - 1e-9, p[i] + 1e-9});
        const auto fam = ModelFamily::general_recurrent(a_box, p_box, 1e-4);
        std::vector<double> free(a);
        free.insert(free.end(), p.begin(), p.end() - 1);
        const auto theta = family_to_theta(fam, free);
        CHECK_NOTHROW(theta.validate());
        CHECK(std::fabs(recurrence_defect(theta.a, theta.p)) <= 1e-10);
        ++built;
    }
    CHECK(built > 150);
}

TEST_CASE("support maps agree with the full family map") {
    const auto lazy = ModelFamily::lazy_temkin();
    CHECK(lazy.support_dim() == 1);
    const auto atoms = lazy.support_atoms(std::vector<double>{0.25});
    CHECK(atoms == std::vector<double>{0.25, 0.5, 0.75});

    const auto two = ModelFamily::two_point();
    CHECK(two.support_dim() == 2);
    CHECK(two.support_atoms(std::vector<double>{0.4, 0.7}) ==
          std::vector<double>{0.4, 0.7});
}

}  // TEST_SUITE
