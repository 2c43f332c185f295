#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "rholab/core.hpp"
#include "rholab/stats.hpp"

namespace rholab::seqsim {

// Outcome of one trajectory. Indices are 1-based symbol positions: mu is the
// first index of the eventually repeating stretch, tau the index of the last
// symbol before the window sequence repeats.
struct RhoResult {
    std::uint64_t mu = 0;
    std::uint64_t tau = 0;
    std::uint64_t period = 0;  // tau - mu
    std::uint64_t tail = 0;    // mu - k

    bool operator==(const RhoResult&) const = default;
};

// Per-step hazard instrumentation for arity 2. Entry j-1 of each per-step
// array describes symbol position j, for j = 1 .. tau-1; the final symbol
// (the one completing the repeat) carries no entry.
struct HazardTrace {
    std::vector<std::uint32_t> prior_hits;    // earlier occurrences of the symbol
    std::vector<double> repeat_prob;          // prior_hits / m
    std::vector<double> step_hazard;          // -log(1 - repeat_prob); +inf at certainty
    std::vector<double> cum_linear_hazard;    // running sum of repeat_prob
    double terminal_hazard = 0;               // fractional piece below the final hazard
    double total_hazard = 0;                  // full steps + terminal; exactly mean-1 exponential
    std::vector<std::uint32_t> occupancy;     // symbol value -> count among first tau-1 symbols
};

namespace detail {

template <class Driver>
std::uint32_t pull_symbol(Driver&& next, const Params& p) {
    std::optional<std::uint32_t> s = next();
    if (!s)
        throw IncompleteTrajectoryError(
            "symbol source exhausted before the window sequence repeated");
    if (*s >= p.alphabet_size) throw std::domain_error("driver symbol out of range");
    return *s;
}

// Consumes symbols until the rolling window code repeats a previous one.
// With R the 1-based window index of the first repeat and s the index of its
// earlier occurrence: tau = R+k-1, mu = s+k-1, period = R-s.
template <class Driver>
RhoResult detect_first_repeat(Driver&& next, const Params& p, FirstRepeatDetector& det) {
    det.reset();
    const std::uint64_t tail_modulus = p.state_count / p.alphabet_size;
    WindowCode w = 0;
    for (std::uint32_t r = 0; r < p.arity; ++r)
        w = w * p.alphabet_size + pull_symbol(next, p);
    std::uint32_t pos = 1;
    std::uint32_t first = det.observe(w, pos);
    while (first == pos) {
        if (pos == std::numeric_limits<std::uint32_t>::max())
            throw CapacityError("trajectory length exceeds the supported range");
        ++pos;
        w = (w % tail_modulus) * p.alphabet_size + pull_symbol(next, p);
        first = det.observe(w, pos);
    }
    RhoResult r;
    r.tau = static_cast<std::uint64_t>(pos) + p.arity - 1;
    r.mu = static_cast<std::uint64_t>(first) + p.arity - 1;
    r.period = pos - first;
    r.tail = first - 1;
    return r;
}

}  // namespace detail

// Samples (mu, tau, period) from an injected finite symbol sequence.
// Throws IncompleteTrajectoryError if it ends before the first repeat.
RhoResult sample_rho_from_stream(std::span<const std::uint32_t> driver, const Params& params);

// Samples (mu, tau, period) from IID uniform symbols. The law equals that of
// a uniformly random map iterated from a uniform seed.
RhoResult sample_rho(const Params& params, RngStream& stream);
RhoResult sample_rho(const Params& params, RngStream& stream, FirstRepeatDetector& det);

// Arity-2 sampling with full hazard instrumentation; the total accumulated
// hazard is exactly mean-1 exponential for every alphabet size.
// Throws UnsupportedArityError unless k = 2.
std::pair<RhoResult, HazardTrace> sample_rho_with_hazard(const Params& params,
                                                         RngStream& stream);
std::pair<RhoResult, HazardTrace> sample_rho_with_hazard(const Params& params,
                                                         RngStream& stream,
                                                         FirstRepeatDetector& det);

// Injected-driver variant; aux supplies the single uniform draw behind the
// terminal hazard piece.
std::pair<RhoResult, HazardTrace> sample_rho_with_hazard_from(
    std::span<const std::uint32_t> driver, const Params& params, RngStream& aux);

// Cumulative linearized hazard of a fixed-length IID sequence (no stopping):
// sum over symbols of (earlier occurrences of that symbol) / m.
double linearized_hazard_sum(std::uint32_t alphabet_size, std::uint64_t steps,
                             RngStream& stream);

struct BatchOptions {
    bool hazard = false;                    // requires arity 2
    std::optional<double> x_threshold;      // tail event tau^2/(2 m^k) >= x
    unsigned workers = 0;                   // 0 = available parallelism
};

struct TrialRecord {
    std::uint64_t trial = 0;
    RhoResult rho;
    double h_total = std::numeric_limits<double>::quiet_NaN();
    double H_final = std::numeric_limits<double>::quiet_NaN();
};

struct BatchResult {
    std::vector<TrialRecord> records;   // ordered by trial index
    stats::StatSummary tau_summary;     // moments of tau plus named extras
};

// Trial i draws from RngStream(master_seed, i); aggregation folds records in
// trial order, so results are identical for every worker count.
BatchResult batch_sample(const Params& params, std::uint64_t n_trials,
                         std::uint64_t master_seed, const BatchOptions& options = {});

}  // namespace rholab::seqsim
