#pragma once

#include <cstdint>
#include <map>
#include <utility>

#include "rholab/core.hpp"

namespace rholab::oracle {

// Exact joint law of (mu, tau) as integer outcome counts. The two exhaustive
// enumerations (all maps with all seeds, all symbol sequences) share the same
// outcome denominator m^(m^k + k), so equal laws mean equal raw counts.
struct JointLaw {
    std::map<std::pair<std::uint64_t, std::uint64_t>, std::uint64_t> joint_counts;
    std::map<std::uint64_t, std::uint64_t> tau_counts;
    std::map<std::uint64_t, std::uint64_t> period_counts;
    std::uint64_t total_outcomes = 0;

    std::map<std::uint64_t, double> tau_pmf() const;
    std::map<std::uint64_t, double> period_pmf() const;
    double p_tau_at(std::uint64_t tau) const;
    double e_tau() const;
    double p_period1() const;
};

// Map-space enumeration result: the joint law plus whole-graph statistics
// that only exist per map.
struct ExactDistribution {
    JointLaw law;
    std::uint64_t n_maps = 0;
    std::uint64_t no_period1_map_count = 0;  // maps whose graph has no 1-cycle
    std::uint64_t sum_cycles = 0;            // cycles summed over maps
    std::uint64_t sum_tau_star = 0;          // max rho length summed over maps

    double e_num_cycles() const;
    double p_no_seed_period1() const;
    double e_tau_star() const;
};

// Enumerates every map (m^(m^k) tables) and every seed window under each.
// Work scales as n_maps * state_count^2; throws CapacityError with the
// estimate when it exceeds work_budget.
ExactDistribution enumerate_maps_exact(const Params& params, unsigned workers = 0,
                                       double work_budget = 1e9);

// Enumerates every symbol sequence of length m^k + k (long enough that the
// window walk always repeats). Throws CapacityError when the sequence count
// exceeds sequence_budget.
JointLaw enumerate_sequences_exact(const Params& params, unsigned workers = 0,
                                   double sequence_budget = 1e8);

}  // namespace rholab::oracle
