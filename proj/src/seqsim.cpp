#include "rholab/seqsim.hpp"

#include <array>
#include <cassert>
#include <cmath>
#include <cstring>
#include <memory>
#include <stdexcept>
#include <string>

#include "rholab/parallel.hpp"
#include "rholab/theory.hpp"

namespace rholab::seqsim {

namespace {

struct SpanDriver {
    std::span<const std::uint32_t> data;
    std::size_t next = 0;
    std::optional<std::uint32_t> operator()() {
        if (next >= data.size()) return std::nullopt;
        return data[next++];
    }
};

struct StreamDriver {
    RngStream* stream;
    std::uint32_t alphabet_size;
    std::optional<std::uint32_t> operator()() { return stream->next_symbol(alphabet_size); }
};

// Shared hazard loop. The repeat check runs before the arriving symbol is
// tallied, so the final symbol never contributes a trace entry; per-step
// arrays therefore cover symbol positions 1 .. tau-1. The terminal piece is
// an exponential draw conditioned below the last step's rate, which makes
// total_hazard exactly mean-1 exponential.
template <class Driver>
std::pair<RhoResult, HazardTrace> hazard_loop(Driver&& next, const Params& p,
                                              RngStream& aux, FirstRepeatDetector& det) {
    if (p.arity != 2)
        throw UnsupportedArityError("hazard instrumentation requires windows of size 2");
    const std::uint32_t m = p.alphabet_size;
    det.reset();
    HazardTrace tr;
    tr.occupancy.assign(m, 0);
    RhoResult rho;
    WindowCode w = 0;
    std::uint32_t prev = 0;
    double cum = 0;
    std::uint64_t j = 0;
    for (;;) {
        ++j;
        const std::uint32_t x = detail::pull_symbol(next, p);
        if (j >= 2) {
            w = static_cast<WindowCode>(prev) * m + x;
            if (j - 1 > std::numeric_limits<std::uint32_t>::max())
                throw CapacityError("trajectory length exceeds the supported range");
            const auto wi = static_cast<std::uint32_t>(j - 1);
            const std::uint32_t first = det.observe(w, wi);
            if (first != wi) {
                rho.tau = j;
                rho.mu = static_cast<std::uint64_t>(first) + 1;
                rho.period = wi - first;
                rho.tail = first - 1;
                break;
            }
        }
        const std::uint32_t y = tr.occupancy[x];
        const double a = static_cast<double>(y) / m;
        tr.prior_hits.push_back(y);
        tr.repeat_prob.push_back(a);
        tr.step_hazard.push_back(y >= m ? std::numeric_limits<double>::infinity()
                                        : -std::log1p(-a));
        cum += a;
        tr.cum_linear_hazard.push_back(cum);
        ++tr.occupancy[x];
        prev = x;
    }
    const std::size_t steps = tr.step_hazard.size();
    assert(steps == rho.tau - 1 && steps >= 2);
    const double terminal_rate = tr.step_hazard[steps - 1];
    assert(terminal_rate > 0);
    double full = 0;
    for (std::size_t i = 0; i + 1 < steps; ++i) full += tr.step_hazard[i];
    tr.terminal_hazard = theory::sample_conditioned_exp(terminal_rate, aux);
    tr.total_hazard = full + tr.terminal_hazard;
    return {rho, tr};
}

}  // namespace

RhoResult sample_rho_from_stream(std::span<const std::uint32_t> driver, const Params& params) {
    FirstRepeatDetector det(params.state_count);
    SpanDriver next{driver};
    return detail::detect_first_repeat(next, params, det);
}

RhoResult sample_rho(const Params& params, RngStream& stream) {
    FirstRepeatDetector det(params.state_count);
    return sample_rho(params, stream, det);
}

RhoResult sample_rho(const Params& params, RngStream& stream, FirstRepeatDetector& det) {
    StreamDriver next{&stream, params.alphabet_size};
    return detail::detect_first_repeat(next, params, det);
}

std::pair<RhoResult, HazardTrace> sample_rho_with_hazard(const Params& params,
                                                         RngStream& stream) {
    FirstRepeatDetector det(params.state_count);
    return sample_rho_with_hazard(params, stream, det);
}

std::pair<RhoResult, HazardTrace> sample_rho_with_hazard(const Params& params,
                                                         RngStream& stream,
                                                         FirstRepeatDetector& det) {
    StreamDriver next{&stream, params.alphabet_size};
    return hazard_loop(next, params, stream, det);
}

std::pair<RhoResult, HazardTrace> sample_rho_with_hazard_from(
    std::span<const std::uint32_t> driver, const Params& params, RngStream& aux) {
    FirstRepeatDetector det(params.state_count);
    SpanDriver next{driver};
    return hazard_loop(next, params, aux, det);
}

double linearized_hazard_sum(std::uint32_t alphabet_size, std::uint64_t steps,
                             RngStream& stream) {
    if (alphabet_size == 0) throw std::domain_error("alphabet size must be positive");
    std::vector<std::uint32_t> tally(alphabet_size, 0);
    std::uint64_t hits = 0;
    for (std::uint64_t i = 0; i < steps; ++i) {
        const std::uint32_t x = stream.next_symbol(alphabet_size);
        hits += tally[x]++;
    }
    return static_cast<double>(hits) / static_cast<double>(alphabet_size);
}

BatchResult batch_sample(const Params& params, std::uint64_t n_trials,
                         std::uint64_t master_seed, const BatchOptions& options) {
    if (n_trials == 0) throw std::domain_error("trial count must be positive");
    if (options.hazard && params.arity != 2)
        throw UnsupportedArityError("hazard instrumentation requires windows of size 2");

    auto records = run_indexed_trials<TrialRecord>(
        n_trials, options.workers, [&](std::uint64_t i) {
            // Detector reuse across the indices a worker handles; each worker
            // thread holds its own copy so streams never interleave.
            thread_local std::unique_ptr<FirstRepeatDetector> det;
            thread_local std::uint64_t det_states = 0;
            if (!det || det_states != params.state_count) {
                det = std::make_unique<FirstRepeatDetector>(params.state_count);
                det_states = params.state_count;
            }
            RngStream stream(master_seed, i);
            TrialRecord rec;
            rec.trial = i;
            if (options.hazard) {
                auto [rho, trace] = sample_rho_with_hazard(params, stream, *det);
                rec.rho = rho;
                rec.h_total = trace.total_hazard;
                rec.H_final = trace.cum_linear_hazard.back();
            } else {
                rec.rho = sample_rho(params, stream, *det);
            }
            return rec;
        });

    BatchResult out;
    out.records = std::move(records);

    std::vector<double> taus;
    taus.reserve(out.records.size());
    double ratio_sum = 0;
    std::uint64_t tail_hits = 0;
    std::array<std::uint64_t, 8> period_counts{};
    const double states = static_cast<double>(params.state_count);
    for (const TrialRecord& rec : out.records) {
        const double tau = static_cast<double>(rec.rho.tau);
        taus.push_back(tau);
        ratio_sum += static_cast<double>(rec.rho.mu) / tau;
        if (options.x_threshold && tau * tau / (2.0 * states) >= *options.x_threshold)
            ++tail_hits;
        if (rec.rho.period >= 1 && rec.rho.period <= period_counts.size())
            ++period_counts[rec.rho.period - 1];
    }
    out.tau_summary = stats::summarize(taus);
    auto& extra = out.tau_summary.extra;
    const double n = static_cast<double>(n_trials);
    extra["mean_mu_over_tau"] = ratio_sum / n;
    if (options.x_threshold) {
        extra["x_threshold"] = *options.x_threshold;
        extra["p_tail_event"] = static_cast<double>(tail_hits) / n;
    }
    for (std::size_t j = 1; j <= period_counts.size(); ++j)
        extra["p_period_" + std::to_string(j)] = static_cast<double>(period_counts[j - 1]) / n;
    return out;
}

}  // namespace rholab::seqsim
