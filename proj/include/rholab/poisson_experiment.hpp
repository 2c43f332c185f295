#pragma once

#include <cstdint>
#include <map>
#include <span>

#include "rholab/core.hpp"
#include "rholab/theory.hpp"

namespace rholab::poisson_experiment {

// One draw of the window collision count. z counts unordered pairs of equal
// window codes among the first n_windows windows (n_windows = N + 1 with
// N = floor(sqrt(2 m^k x))), so 0 <= z <= C(n_windows, 2).
struct CollisionRecord {
    std::uint64_t z = 0;
    std::uint64_t n_windows = 0;
    double x = 0;
    Params params{};
};

// Coincident window pairs among all windows of a symbol span (needs at least
// k symbols): sum over code multiplicities of C(mult, 2).
std::uint64_t collision_pairs(std::span<const std::uint32_t> symbols, const Params& params);

// Draws the N+k symbols that make up N+1 windows and counts coincident pairs.
CollisionRecord sample_Z(const Params& params, double x, RngStream& stream);

struct PoissonGap {
    double lambda = 0;            // reference Poisson mean, pair count C(N,2)/m^k
    double tv_empirical = 0;      // TV between empirical law of z and Poisson(lambda)
    double tv_error_bar = 0;      // Monte Carlo heuristic sqrt(support/n)
    double bound_b1_b2 = 0;       // Chen-Stein b1 + b2 at these parameters
    double p0_hat = 0;            // empirical P(z = 0)
    double p0_gap = 0;            // |p0_hat - exp(-lambda)|
    std::uint64_t n_windows = 0;  // windows per trial (N + 1)
    std::uint64_t n_trials = 0;
    std::map<std::uint64_t, double> z_pmf;  // empirical law of z
};

// Empirical law of Z over n_trials independent draws (trial i uses
// RngStream(master_seed, i)) against the Poisson reference.
PoissonGap poisson_gap(const Params& params, double x, std::uint64_t n_trials,
                       std::uint64_t master_seed, unsigned workers = 0);

}  // namespace rholab::poisson_experiment
