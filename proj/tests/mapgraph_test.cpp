#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include "rholab/core.hpp"
#include "rholab/mapgraph.hpp"
#include "rholab/seqsim.hpp"
#include "rholab/stats.hpp"

using namespace rholab;
using doctest::Approx;
using mapgraph::MapMode;
using mapgraph::MapTable;

TEST_CASE("table construction basics") {
    const auto p11 = Params::create(1, 2);
    RngStream stream(1, 0);
    const auto trivial = MapTable::build(p11, stream);
    CHECK(trivial.value_at(0) == 0);
    CHECK(trivial.successor(0) == 0);

    const auto p = Params::create(5, 2);
    RngStream s1(42, 9), s2(42, 9);
    const auto a = MapTable::build(p, s1);
    const auto b = MapTable::build(p, s2);
    CHECK(a.values() == b.values());
    for (WindowCode c = 0; c < p.state_count; ++c) {
        CHECK(a.value_at(c) < p.alphabet_size);
        CHECK(a.successor(c) == roll_window(c, a.value_at(c), p));
    }

    CHECK_THROWS_AS(a.value_at(p.state_count), std::domain_error);
    CHECK_THROWS_AS(MapTable::build(Params::create(1000, 2), s1, MapMode::dense, 100000),
                    CapacityError);
    CHECK_THROWS_AS(MapTable::from_values(p, {0, 1}), std::domain_error);
    CHECK_THROWS_AS(MapTable::from_values(Params::create(2, 1), {0, 2}),
                    std::domain_error);
}

TEST_CASE("lazy tables are stable and hide no value table") {
    const auto p = Params::create(7, 2);
    RngStream stream(33, 0);
    const auto lazy = MapTable::build(p, stream, MapMode::lazy);
    CHECK(lazy.mode() == MapMode::lazy);
    CHECK_THROWS_AS(lazy.values(), std::domain_error);
    std::vector<std::uint32_t> first_pass;
    for (WindowCode c = 0; c < p.state_count; ++c) first_pass.push_back(lazy.value_at(c));
    // Access order and repetition must not change derived entries.
    for (WindowCode c = p.state_count; c-- > 0;) {
        CHECK(lazy.value_at(c) == first_pass[static_cast<std::size_t>(c)]);
        CHECK(lazy.value_at(c) == first_pass[static_cast<std::size_t>(c)]);
    }
}

TEST_CASE("lazy and dense modes share one law") {
    const auto p = Params::create(7, 2);
    const std::uint64_t n = 20000;
    std::map<std::uint64_t, double> dense_pmf, lazy_pmf;
    for (std::uint64_t i = 0; i < n; ++i) {
        RngStream sd(101, i);
        const auto dense = MapTable::build(p, sd);
        const auto seed = sd.next_index(p.state_count);
        dense_pmf[mapgraph::trajectory(dense, seed).tau] += 1.0 / static_cast<double>(n);

        RngStream sl(202, i);
        const auto lazy = MapTable::build(p, sl, MapMode::lazy);
        const auto lazy_seed = sl.next_index(p.state_count);
        lazy_pmf[mapgraph::trajectory(lazy, lazy_seed).tau] += 1.0 / static_cast<double>(n);
    }
    CHECK(stats::tv_distance(dense_pmf, lazy_pmf) < 0.025);
}

TEST_CASE("trajectory hand examples") {
    const auto p22 = Params::create(2, 2);
    const auto table = MapTable::from_values(p22, {0, 0, 1, 1});
    CHECK(mapgraph::trajectory(table, 1) == seqsim::RhoResult{2, 4, 2, 0});
    CHECK(mapgraph::trajectory(table, 0) == seqsim::RhoResult{2, 3, 1, 0});
    CHECK_THROWS_AS(mapgraph::trajectory(table, 4), std::domain_error);

    const auto p21 = Params::create(2, 1);
    const auto swap = MapTable::from_values(p21, {1, 0});
    CHECK(mapgraph::trajectory(swap, 0) == seqsim::RhoResult{1, 3, 2, 0});
}

TEST_CASE("graph census hand examples") {
    const auto p22 = Params::create(2, 2);
    // Next symbol copies the older window symbol: two fixed windows plus one
    // 2-cycle between (0,1) and (1,0).
    const auto stats22 = mapgraph::analyze_graph(MapTable::from_values(p22, {0, 0, 1, 1}));
    CHECK(stats22.n_cycles == 3);
    CHECK(stats22.cycle_length_hist ==
          std::map<std::uint64_t, std::uint64_t>{{1, 2}, {2, 1}});
    CHECK(stats22.tau_star == 4);
    CHECK(stats22.mean_tau == Approx(3.5));
    CHECK(stats22.frac_seeds_period1 == Approx(0.5));
    CHECK(stats22.has_diag_fixed_point);

    const auto p21 = Params::create(2, 1);
    const auto identity = mapgraph::analyze_graph(MapTable::from_values(p21, {0, 1}));
    CHECK(identity.n_cycles == 2);
    CHECK(identity.tau_star == 2);
    CHECK(identity.mean_tau == Approx(2.0));
    CHECK(identity.frac_seeds_period1 == Approx(1.0));
    CHECK(identity.has_diag_fixed_point);

    const auto swap = mapgraph::analyze_graph(MapTable::from_values(p21, {1, 0}));
    CHECK(swap.n_cycles == 1);
    CHECK(swap.cycle_length_hist == std::map<std::uint64_t, std::uint64_t>{{2, 1}});
    CHECK(swap.frac_seeds_period1 == Approx(0.0));
    CHECK_FALSE(swap.has_diag_fixed_point);
}

TEST_CASE("census agrees with per-seed trajectories") {
    RngStream stream(64, 0);
    for (const auto& [m, k] : std::vector<std::pair<std::uint32_t, std::uint32_t>>{
             {3, 2}, {2, 3}, {5, 2}, {4, 1}}) {
        const auto p = Params::create(m, k);
        for (int rep = 0; rep < 10; ++rep) {
            const auto table = MapTable::build(p, stream);
            const auto graph = mapgraph::analyze_graph(table);

            std::vector<std::uint32_t> tail(p.state_count), cycle_len(p.state_count);
            mapgraph::CensusScratch scratch;
            std::map<std::uint64_t, std::uint64_t> hist;
            const auto n_cycles =
                mapgraph::census_into(p, table.values(), tail, cycle_len, &hist, scratch);
            CHECK(n_cycles == graph.n_cycles);
            CHECK(hist == graph.cycle_length_hist);

            std::uint64_t cyclic_states = 0;
            for (const auto& [len, count] : hist) cyclic_states += len * count;
            CHECK(cyclic_states <= p.state_count);

            std::uint64_t max_tau = 0, period1 = 0;
            double tau_sum = 0;
            for (WindowCode c = 0; c < p.state_count; ++c) {
                const auto r = mapgraph::trajectory(table, c);
                CHECK(r.tail == tail[c]);
                CHECK(r.period == cycle_len[c]);
                CHECK(r.mu == tail[c] + k);
                CHECK(r.tau == tail[c] + cycle_len[c] + k);
                max_tau = std::max(max_tau, r.tau);
                tau_sum += static_cast<double>(r.tau);
                if (r.period == 1) ++period1;
            }
            CHECK(graph.tau_star == max_tau);
            CHECK(graph.mean_tau ==
                  Approx(tau_sum / static_cast<double>(p.state_count)).epsilon(1e-12));
            CHECK(graph.frac_seeds_period1 ==
                  Approx(static_cast<double>(period1) / static_cast<double>(p.state_count)));
        }
    }
}

TEST_CASE("period one seeds exist exactly when the diagonal fixes a symbol") {
    RngStream stream(2025, 0);
    const auto p = Params::create(3, 2);
    for (int rep = 0; rep < 50; ++rep) {
        const auto table = MapTable::build(p, stream);
        const auto graph = mapgraph::analyze_graph(table);
        bool diag = false;
        for (std::uint32_t d = 0; d < p.alphabet_size; ++d)
            diag = diag || (table.value_at(encode_window({d, d}, p)) == d);
        CHECK(graph.has_diag_fixed_point == diag);
        CHECK((graph.frac_seeds_period1 > 0.0) == diag);
    }
}

TEST_CASE("map plus seed sampling matches the trajectory of the drawn table") {
    const auto p = Params::create(4, 2);
    for (std::uint64_t i = 0; i < 40; ++i) {
        RngStream s1(7177, i), s2(7177, i);
        const auto direct = mapgraph::sample_map_trajectory(p, s1);
        const auto table = MapTable::build(p, s2);
        const auto seed = s2.next_index(p.state_count);
        CHECK(direct == mapgraph::trajectory(table, seed));
    }
}

TEST_CASE("large lazy walk stays within bounds") {
    const auto p = Params::create(3000, 2);  // nine million states, no table
    RngStream stream(808, 0);
    const auto table = MapTable::build(p, stream, MapMode::lazy);
    FirstRepeatDetector det(p.state_count);
    const auto r = mapgraph::trajectory(table, 12345, det);
    CHECK(r.tau >= 3);
    CHECK(r.tau <= p.state_count + 2);
    CHECK(r.mu + r.period == r.tau);
}

TEST_CASE("diagonal fixed point estimator") {
    const auto sure = mapgraph::diag_fixed_point_prob(1, 500, 5);
    CHECK(sure.estimate == Approx(1.0));
    CHECK(sure.n_maps == 500);

    const auto est = mapgraph::diag_fixed_point_prob(2, 40000, 6);
    const double target = 0.75;  // 1 - (1/2)^2
    const double sigma = std::sqrt(target * (1 - target) / 40000.0);
    CHECK(std::fabs(est.estimate - target) < 4.0 * sigma);
    CHECK(est.stderr_ == Approx(std::sqrt(est.estimate * (1 - est.estimate) / 40000.0)));

    const auto w1 = mapgraph::diag_fixed_point_prob(5, 3000, 9, 1);
    const auto w4 = mapgraph::diag_fixed_point_prob(5, 3000, 9, 4);
    CHECK(w1.estimate == w4.estimate);

    CHECK_THROWS_AS(mapgraph::diag_fixed_point_prob(0, 10, 1), std::domain_error);
    CHECK_THROWS_AS(mapgraph::diag_fixed_point_prob(3, 0, 1), std::domain_error);
}
