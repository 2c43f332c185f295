#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "rholab/core.hpp"
#include "rholab/stats.hpp"
#include "rholab/theory.hpp"

using namespace rholab;
using doctest::Approx;

TEST_CASE("asymptotic tau moments") {
    const auto m2 = theory::asymptotic_tau_moments(Params::create(1000, 2));
    CHECK(m2.mean == Approx(1253.3141373155003).epsilon(1e-12));
    CHECK(m2.variance == Approx(429203.67320510344).epsilon(1e-12));
    CHECK_FALSE(m2.heuristic);

    const auto m3 = theory::asymptotic_tau_moments(Params::create(100, 3));
    CHECK(m3.mean == Approx(1253.3141373155003).epsilon(1e-12));
    CHECK(m3.heuristic);

    const auto small = theory::asymptotic_tau_moments(Params::create(4, 2));
    CHECK(small.mean == Approx(4.0 * std::sqrt(std::acos(-1.0) / 2.0)).epsilon(1e-12));
}

TEST_CASE("exponential tail reference") {
    CHECK(theory::exponential_tail(0.0) == Approx(1.0));
    CHECK(theory::exponential_tail(1.0) == Approx(0.36787944117144233).epsilon(1e-15));
    CHECK(theory::exponential_tail(2.5) == Approx(std::exp(-2.5)).epsilon(1e-15));
    CHECK_THROWS_AS(theory::exponential_tail(-0.1), std::domain_error);
}

TEST_CASE("birthday survival exact values") {
    CHECK(theory::birthday_survival(4, 3) == Approx(0.375).epsilon(1e-15));
    CHECK(theory::birthday_survival(365, 0) == Approx(1.0));
    CHECK(theory::birthday_survival(365, 1) == Approx(1.0));
    CHECK(theory::birthday_survival(4, 5) == Approx(0.0));

    double prev = 1.0;
    for (std::uint64_t n = 0; n <= 30; ++n) {
        const double s = theory::birthday_survival(25, n);
        CHECK(s <= prev + 1e-15);
        prev = s;
    }

    // E[draws until first collision] = sum of survival probabilities.
    double expected_draws = 0;
    for (std::uint64_t n = 0; n <= 366; ++n)
        expected_draws += theory::birthday_survival(365, n);
    CHECK(expected_draws == Approx(24.616585894598852).epsilon(1e-12));
}

TEST_CASE("collision bound parameters at the documented point") {
    const auto b = theory::chen_stein_bounds(Params::create(10, 2), 1.0);
    CHECK(b.n_windows == 14);
    CHECK(b.lambda == Approx(0.91).epsilon(1e-12));
    CHECK(b.b1 == Approx(2.0384).epsilon(1e-12));
    CHECK(b.b2 == Approx(7.8624).epsilon(1e-12));
    CHECK(b.pair_count_alt == Approx(105.0).epsilon(1e-12));
}

TEST_CASE("collision bound window count edge cases") {
    // 2 m^k x = 400 is a perfect square; N must be exactly 20.
    CHECK(theory::chen_stein_bounds(Params::create(10, 2), 2.0).n_windows == 20);
    const auto tiny = theory::chen_stein_bounds(Params::create(2, 2), 0.125);
    CHECK(tiny.n_windows == 1);
    CHECK(tiny.lambda == Approx(0.0));
    CHECK_THROWS_AS(theory::chen_stein_bounds(Params::create(10, 2), 0.0),
                    std::domain_error);
    CHECK_THROWS_AS(theory::chen_stein_bounds(Params::create(10, 2), -1.0),
                    std::domain_error);
}

TEST_CASE("collision bounds shrink and lambda approaches x") {
    double prev = std::numeric_limits<double>::infinity();
    for (std::uint32_t m : {100u, 1000u, 10000u}) {
        const auto b = theory::chen_stein_bounds(Params::create(m, 2), 1.0);
        CHECK(b.b1 + b.b2 < prev);
        prev = b.b1 + b.b2;
    }
    for (double x : {1.0, 2.5}) {
        for (std::uint32_t m : {100u, 1000u}) {
            const auto p = Params::create(m, 2);
            const auto b = theory::chen_stein_bounds(p, x);
            const double states = static_cast<double>(p.state_count);
            CHECK(std::fabs(b.lambda - x) < 3.0 * std::sqrt(x / states));
        }
    }
}

TEST_CASE("linearized hazard moments") {
    const auto a = theory::hazard_H_moments(5, 10);
    CHECK(a.mean == Approx(0.1).epsilon(1e-14));
    CHECK(a.variance == Approx(0.009).epsilon(1e-14));

    const auto degenerate = theory::hazard_H_moments(2, 1);
    CHECK(degenerate.mean == Approx(1.0));
    CHECK(degenerate.variance == Approx(0.0));

    const auto c13 = theory::hazard_H_moments(60, 50);
    CHECK(c13.mean == Approx(0.708).epsilon(1e-14));
    CHECK(c13.variance == Approx(0.0138768).epsilon(1e-10));

    CHECK_THROWS_AS(theory::hazard_H_moments(1, 10), std::domain_error);
    CHECK_THROWS_AS(theory::hazard_H_moments(5, 0), std::domain_error);
}

TEST_CASE("conditioned exponential sampler") {
    RngStream stream(8080, 0);
    std::vector<double> xs;
    xs.reserve(100000);
    for (int i = 0; i < 100000; ++i) {
        const double v = theory::sample_conditioned_exp(1.0, stream);
        REQUIRE(v > 0.0);
        REQUIRE(v < 1.0);
        xs.push_back(v);
    }
    const double z = -std::expm1(-1.0);
    const auto r = stats::ks_test(xs, [z](double t) {
        if (t <= 0) return 0.0;
        if (t >= 1) return 1.0;
        return -std::expm1(-t) / z;
    });
    CHECK(r.d < 0.006);

    xs.clear();
    const double inf = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 100000; ++i)
        xs.push_back(theory::sample_conditioned_exp(inf, stream));
    const auto full = stats::ks_test(xs, [](double t) { return t <= 0 ? 0.0 : -std::expm1(-t); });
    CHECK(full.d < 0.006);

    CHECK_THROWS_AS(theory::sample_conditioned_exp(0.0, stream), std::domain_error);
    CHECK_THROWS_AS(theory::sample_conditioned_exp(-1.0, stream), std::domain_error);
}

TEST_CASE("window collision probability is overlap independent") {
    for (std::uint32_t m : {2u, 3u, 4u}) {
        for (std::uint32_t k : {1u, 2u, 3u}) {
            const auto p = Params::create(m, k);
            const double expected = 1.0 / static_cast<double>(p.state_count);
            for (std::uint64_t gap = 1; gap <= k + 1; ++gap) {
                CHECK(theory::window_collision_prob(p, 1, 1 + gap) ==
                      Approx(expected).epsilon(1e-12));

                // Brute force over every symbol assignment spanning both
                // windows: the number of coincident pairs must be m^gap.
                const std::uint64_t span = gap + k;
                std::uint64_t tuples = 1;
                for (std::uint64_t i = 0; i < span; ++i) tuples *= m;
                std::uint64_t hits = 0;
                std::vector<std::uint32_t> symbols(span, 0);
                for (std::uint64_t t = 0; t < tuples; ++t) {
                    std::uint64_t rem = t;
                    for (auto& s : symbols) {
                        s = static_cast<std::uint32_t>(rem % m);
                        rem /= m;
                    }
                    bool equal = true;
                    for (std::uint32_t i = 0; i < k; ++i)
                        equal = equal && (symbols[i] == symbols[gap + i]);
                    if (equal) ++hits;
                }
                std::uint64_t expected_hits = 1;
                for (std::uint64_t i = 0; i < gap; ++i) expected_hits *= m;
                CHECK(hits == expected_hits);
            }
        }
    }
    CHECK_THROWS_AS(theory::window_collision_prob(Params::create(3, 2), 2, 2),
                    std::domain_error);
    CHECK_THROWS_AS(theory::window_collision_prob(Params::create(3, 2), 3, 2),
                    std::domain_error);
}
