#pragma once

#include <cstdint>

#include "rholab/core.hpp"

namespace rholab::theory {

struct TauMoments {
    double mean;      // m^(k/2) * sqrt(pi/2)
    double variance;  // (2 - pi/2) * m^k
    // Moment convergence is proven only for arity 2; other arities carry the
    // distribution-limit scaling as a heuristic.
    bool heuristic;
};

TauMoments asymptotic_tau_moments(const Params& params);

// Reference survival value e^(-x); std::domain_error for x < 0.
double exponential_tail(double x);

// Exact P(first n IID uniform draws from a population of given size are all
// distinct): product of (1 - i/population) for i < n; 0 when n exceeds the
// population.
double birthday_survival(std::uint64_t population, std::uint64_t draws);

struct TheoryBounds {
    std::uint64_t n_windows;  // N = floor(sqrt(2 m^k x))
    double lambda;            // C(N,2) m^-k
    double b1;                // lambda * 8kN * m^-k
    double b2;                // C(N,2) * (16 k^2 m^-(k+1) + 8kN m^-2k)
    double pair_count_alt;    // C(N+1,2), the pair count for indices 0..N
};

// Poisson-approximation error bounds for the window-collision count.
// std::domain_error for x <= 0; CapacityError when N overflows 64 bits.
TheoryBounds chen_stein_bounds(const Params& params, double x);

struct HazardMoments {
    double mean;      // C(steps,2) / m^2
    double variance;  // C(steps,2) * (1/m^3 - 1/m^4)
};

// Exact first two moments of the cumulative linearized hazard after the given
// number of IID symbols (pairwise-collision combinatorics, arity 2).
// std::domain_error for steps < 2 or m < 1.
HazardMoments hazard_H_moments(std::uint64_t steps, std::uint64_t alphabet_size);

// Mean-1 exponential conditioned below x via inverse transform:
// -log(1 - U (1 - e^-x)) with U uniform on (0,1). Values lie strictly in
// (0, x); x may be +infinity, where this reduces to a plain exponential draw.
// std::domain_error for x <= 0.
double sample_conditioned_exp(double x, RngStream& stream);

// Probability that windows at positions i < j coincide: m^-k regardless of
// overlap. std::domain_error unless i < j.
double window_collision_prob(const Params& params, std::uint64_t i, std::uint64_t j);

}  // namespace rholab::theory
