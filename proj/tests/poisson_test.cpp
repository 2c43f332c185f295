#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "rholab/core.hpp"
#include "rholab/poisson_experiment.hpp"
#include "rholab/seqsim.hpp"
#include "rholab/stats.hpp"
#include "rholab/theory.hpp"

using namespace rholab;
using doctest::Approx;

namespace {

std::uint64_t naive_pairs(const std::vector<std::uint32_t>& symbols, const Params& p) {
    std::vector<WindowCode> codes;
    for (std::size_t i = 0; i + p.arity <= symbols.size(); ++i) {
        std::vector<std::uint32_t> w(symbols.begin() + static_cast<std::ptrdiff_t>(i),
                                     symbols.begin() + static_cast<std::ptrdiff_t>(i + p.arity));
        codes.push_back(encode_window(w, p));
    }
    std::uint64_t pairs = 0;
    for (std::size_t i = 0; i < codes.size(); ++i)
        for (std::size_t j = i + 1; j < codes.size(); ++j)
            if (codes[i] == codes[j]) ++pairs;
    return pairs;
}

}  // namespace

TEST_CASE("collision pairs match the quadratic count") {
    RngStream stream(314, 0);
    for (std::uint32_t m : {2u, 3u, 10u}) {
        for (std::uint32_t k : {1u, 2u, 3u}) {
            const auto p = Params::create(m, k);
            for (int rep = 0; rep < 30; ++rep) {
                const std::size_t len = k + 2 + static_cast<std::size_t>(stream.next_index(58));
                std::vector<std::uint32_t> symbols;
                symbols.reserve(len);
                for (std::size_t i = 0; i < len; ++i)
                    symbols.push_back(stream.next_symbol(m));
                CHECK(poisson_experiment::collision_pairs(symbols, p) ==
                      naive_pairs(symbols, p));
            }
        }
    }
    const auto p = Params::create(3, 2);
    const std::vector<std::uint32_t> too_short{1};
    CHECK_THROWS_AS(poisson_experiment::collision_pairs(too_short, p), std::domain_error);
}

TEST_CASE("degenerate single-pair draw") {
    const auto p = Params::create(1, 2);
    RngStream stream(5, 0);
    const auto rec = poisson_experiment::sample_Z(p, 1.0, stream);
    CHECK(rec.n_windows == 2);  // N = floor(sqrt(2)) = 1, plus one
    CHECK(rec.z == 1);          // both windows are (0,0)
    CHECK(rec.x == Approx(1.0));
}

TEST_CASE("collision count mean matches the pair count") {
    const auto p = Params::create(10, 2);
    const auto bounds = theory::chen_stein_bounds(p, 1.0);
    const double target = bounds.pair_count_alt / static_cast<double>(p.state_count);
    std::vector<double> zs;
    const int n = 20000;
    zs.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) {
        RngStream stream(60601, i);
        zs.push_back(static_cast<double>(poisson_experiment::sample_Z(p, 1.0, stream).z));
    }
    const auto s = stats::summarize(zs);
    CHECK(std::fabs(s.mean - target) < 4.0 * s.se_mean);
}

TEST_CASE("zero collisions happen exactly when the walk outlives the windows") {
    for (std::uint32_t m : {10u, 30u}) {
        for (double x : {0.5, 1.0}) {
            const auto p = Params::create(m, 2);
            const auto bounds = theory::chen_stein_bounds(p, x);
            const std::uint64_t horizon = bounds.n_windows + p.arity;
            RngStream stream(1861 + m, static_cast<std::uint64_t>(x * 2));
            for (int rep = 0; rep < 500; ++rep) {
                std::vector<std::uint32_t> symbols;
                symbols.reserve(horizon);
                for (std::uint64_t i = 0; i < horizon; ++i)
                    symbols.push_back(stream.next_symbol(m));
                const auto z = poisson_experiment::collision_pairs(symbols, p);
                bool survived;
                try {
                    survived = seqsim::sample_rho_from_stream(symbols, p).tau > horizon;
                } catch (const IncompleteTrajectoryError&) {
                    survived = true;  // no repeat within the horizon at all
                }
                CHECK((z == 0) == survived);
            }
        }
    }
}

TEST_CASE("zero-collision rate approaches the reference exponential") {
    const auto p = Params::create(100, 2);
    const auto bounds = theory::chen_stein_bounds(p, 1.0);
    const int n = 20000;
    int zero = 0;
    for (std::uint64_t i = 0; i < n; ++i) {
        RngStream stream(777001, i);
        if (poisson_experiment::sample_Z(p, 1.0, stream).z == 0) ++zero;
    }
    const double p0 = zero / static_cast<double>(n);
    const double ref = std::exp(-bounds.lambda);
    const double sigma = std::sqrt(ref * (1.0 - ref) / n);
    CHECK(std::fabs(p0 - ref) < 3.0 * sigma);
}

TEST_CASE("survival probabilities line up across both experiments") {
    // At m = 300 the window-overlap bias is far below Monte Carlo noise, so
    // P(Z = 0) and the tau tail estimated from independent runs must agree.
    const auto p = Params::create(300, 2);
    const auto bounds = theory::chen_stein_bounds(p, 0.5);
    const std::uint64_t n = 50000;
    std::uint64_t zero = 0;
    for (std::uint64_t i = 0; i < n; ++i) {
        RngStream stream(90210, i);
        if (poisson_experiment::sample_Z(p, 0.5, stream).z == 0) ++zero;
    }
    seqsim::BatchOptions bo;
    const auto batch = seqsim::batch_sample(p, n, 48109, bo);
    std::uint64_t outlived = 0;
    for (const auto& rec : batch.records)
        if (rec.rho.tau > bounds.n_windows + p.arity - 1) ++outlived;
    const double p_zero = static_cast<double>(zero) / static_cast<double>(n);
    const double p_tail = static_cast<double>(outlived) / static_cast<double>(n);
    const double sigma = std::sqrt(2.0 * p_zero * (1.0 - p_zero) / static_cast<double>(n));
    CHECK(std::fabs(p_zero - p_tail) < 3.0 * sigma);
}

TEST_CASE("gap experiment field sanity") {
    const auto p = Params::create(300, 2);
    const auto gap = poisson_experiment::poisson_gap(p, 0.5, 20000, 11211);
    CHECK(gap.n_windows == 301);
    CHECK(gap.n_trials == 20000);
    CHECK(gap.lambda == Approx(44850.0 / 90000.0).epsilon(1e-12));
    CHECK(gap.bound_b1_b2 == Approx(0.1595).epsilon(0.01));
    CHECK(gap.tv_empirical < 0.05);
    CHECK(gap.p0_gap <= gap.bound_b1_b2);
    double mass = 0;
    for (const auto& [z, prob] : gap.z_pmf) {
        (void)z;
        mass += prob;
    }
    CHECK(mass == Approx(1.0).epsilon(1e-9));
}

TEST_CASE("gap experiment is worker independent") {
    const auto p = Params::create(30, 2);
    const auto w1 = poisson_experiment::poisson_gap(p, 0.5, 4000, 5, 1);
    const auto w3 = poisson_experiment::poisson_gap(p, 0.5, 4000, 5, 3);
    CHECK(w1.tv_empirical == w3.tv_empirical);
    CHECK(w1.p0_hat == w3.p0_hat);
    CHECK(w1.z_pmf == w3.z_pmf);
}

TEST_CASE("window budget guards enormous draws") {
    const auto p = Params::create(100000000, 2);
    RngStream stream(1, 0);
    CHECK_THROWS_AS(poisson_experiment::sample_Z(p, 1.0, stream), CapacityError);
}
