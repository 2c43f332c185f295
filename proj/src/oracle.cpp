#include "rholab/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <vector>

#include "rholab/mapgraph.hpp"
#include "rholab/parallel.hpp"

namespace rholab::oracle {

namespace {

// Accumulator merged across worker blocks; every field is an integer count,
// so the merge order cannot affect the result.
struct Accum {
    std::map<std::pair<std::uint64_t, std::uint64_t>, std::uint64_t> joint;
    std::map<std::uint64_t, std::uint64_t> tau;
    std::map<std::uint64_t, std::uint64_t> period;
    std::uint64_t no_period1_maps = 0;
    std::uint64_t cycles = 0;
    std::uint64_t tau_star = 0;

    void merge_from(const Accum& other) {
        for (const auto& [key, c] : other.joint) joint[key] += c;
        for (const auto& [key, c] : other.tau) tau[key] += c;
        for (const auto& [key, c] : other.period) period[key] += c;
        no_period1_maps += other.no_period1_maps;
        cycles += other.cycles;
        tau_star += other.tau_star;
    }
};

// Runs body(block_lo, block_hi, accum) over a block partition of [0, n) and
// folds the per-block accumulators in block order.
template <class Body>
Accum run_blocks(std::uint64_t n, unsigned workers, Body body) {
    const unsigned w = static_cast<unsigned>(
        std::max<std::uint64_t>(1, std::min<std::uint64_t>(resolve_workers(workers), n)));
    std::vector<Accum> parts(w);
    std::vector<std::thread> threads;
    std::exception_ptr first_error;
    std::mutex error_mutex;
    for (unsigned t = 0; t < w; ++t) {
        const std::uint64_t lo = n / w * t + std::min<std::uint64_t>(n % w, t);
        const std::uint64_t hi = n / w * (t + 1) + std::min<std::uint64_t>(n % w, t + 1);
        threads.emplace_back([&, t, lo, hi] {
            try {
                body(lo, hi, parts[t]);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& th : threads) th.join();
    if (first_error) std::rethrow_exception(first_error);
    Accum total;
    for (const Accum& part : parts) total.merge_from(part);
    return total;
}

std::string capacity_message(const char* what, double estimate, double budget) {
    std::ostringstream os;
    os << what << " needs about " << estimate << " units of work, over the budget of "
       << budget;
    return os.str();
}

// Exact m^e for small exact cases; callers bound e via the work budget first.
std::uint64_t u64_pow(std::uint64_t base, std::uint64_t exp) {
    std::uint64_t r = 1;
    for (std::uint64_t i = 0; i < exp; ++i) r *= base;
    return r;
}

}  // namespace

std::map<std::uint64_t, double> JointLaw::tau_pmf() const {
    std::map<std::uint64_t, double> pmf;
    for (const auto& [t, c] : tau_counts)
        pmf[t] = static_cast<double>(c) / static_cast<double>(total_outcomes);
    return pmf;
}

std::map<std::uint64_t, double> JointLaw::period_pmf() const {
    std::map<std::uint64_t, double> pmf;
    for (const auto& [p, c] : period_counts)
        pmf[p] = static_cast<double>(c) / static_cast<double>(total_outcomes);
    return pmf;
}

double JointLaw::p_tau_at(std::uint64_t tau) const {
    auto it = tau_counts.find(tau);
    if (it == tau_counts.end()) return 0;
    return static_cast<double>(it->second) / static_cast<double>(total_outcomes);
}

double JointLaw::e_tau() const {
    long double sum = 0;
    for (const auto& [t, c] : tau_counts)
        sum += static_cast<long double>(t) * static_cast<long double>(c);
    return static_cast<double>(sum / static_cast<long double>(total_outcomes));
}

double JointLaw::p_period1() const {
    auto it = period_counts.find(1);
    if (it == period_counts.end()) return 0;
    return static_cast<double>(it->second) / static_cast<double>(total_outcomes);
}

double ExactDistribution::e_num_cycles() const {
    return static_cast<double>(sum_cycles) / static_cast<double>(n_maps);
}

double ExactDistribution::p_no_seed_period1() const {
    return static_cast<double>(no_period1_map_count) / static_cast<double>(n_maps);
}

double ExactDistribution::e_tau_star() const {
    return static_cast<double>(sum_tau_star) / static_cast<double>(n_maps);
}

ExactDistribution enumerate_maps_exact(const Params& params, unsigned workers,
                                       double work_budget) {
    const std::uint64_t states = params.state_count;
    const double state_d = static_cast<double>(states);
    const double estimate =
        std::pow(static_cast<double>(params.alphabet_size), state_d) * state_d * state_d;
    if (!(estimate <= work_budget))
        throw CapacityError(capacity_message("map enumeration", estimate, work_budget));

    const std::uint64_t n_maps = u64_pow(params.alphabet_size, states);
    const std::uint32_t m = params.alphabet_size;

    Accum total = run_blocks(n_maps, workers, [&](std::uint64_t lo, std::uint64_t hi,
                                                  Accum& acc) {
        std::vector<std::uint32_t> values(states), tail(states), cycle_len(states);
        mapgraph::CensusScratch scratch;
        // Map index written in base m, digit c = table entry for code c.
        std::uint64_t idx = lo;
        for (std::uint64_t c = 0; c < states; ++c) {
            values[c] = static_cast<std::uint32_t>(idx % m);
            idx /= m;
        }
        for (std::uint64_t map_i = lo; map_i < hi; ++map_i) {
            const std::uint64_t n_cycles =
                mapgraph::census_into(params, values, tail, cycle_len, nullptr, scratch);
            acc.cycles += n_cycles;
            std::uint64_t max_rho = 0;
            bool any_period1 = false;
            for (std::uint64_t c = 0; c < states; ++c) {
                const std::uint64_t rho =
                    static_cast<std::uint64_t>(tail[c]) + cycle_len[c];
                const std::uint64_t mu = tail[c] + params.arity;
                const std::uint64_t tau = rho + params.arity;
                ++acc.joint[{mu, tau}];
                ++acc.tau[tau];
                ++acc.period[cycle_len[c]];
                max_rho = std::max(max_rho, rho);
                if (cycle_len[c] == 1) any_period1 = true;
            }
            acc.tau_star += max_rho + params.arity;
            if (!any_period1) ++acc.no_period1_maps;
            // Odometer step to the next table.
            for (std::uint64_t c = 0; c < states; ++c) {
                if (++values[c] < m) break;
                values[c] = 0;
            }
        }
    });

    ExactDistribution out;
    out.n_maps = n_maps;
    out.no_period1_map_count = total.no_period1_maps;
    out.sum_cycles = total.cycles;
    out.sum_tau_star = total.tau_star;
    out.law.joint_counts = std::move(total.joint);
    out.law.tau_counts = std::move(total.tau);
    out.law.period_counts = std::move(total.period);
    out.law.total_outcomes = n_maps * states;
    return out;
}

JointLaw enumerate_sequences_exact(const Params& params, unsigned workers,
                                   double sequence_budget) {
    const std::uint64_t horizon = params.state_count + params.arity;
    const double estimate =
        std::pow(static_cast<double>(params.alphabet_size), static_cast<double>(horizon));
    if (!(estimate <= sequence_budget))
        throw CapacityError(
            capacity_message("sequence enumeration", estimate, sequence_budget));

    const std::uint64_t n_seqs = u64_pow(params.alphabet_size, horizon);
    const std::uint32_t m = params.alphabet_size;
    const std::uint64_t tail_modulus = params.state_count / m;

    Accum total = run_blocks(n_seqs, workers, [&](std::uint64_t lo, std::uint64_t hi,
                                                  Accum& acc) {
        std::vector<std::uint32_t> symbols(horizon);
        FirstRepeatDetector det(params.state_count);
        std::uint64_t idx = lo;
        for (std::uint64_t i = 0; i < horizon; ++i) {
            symbols[i] = static_cast<std::uint32_t>(idx % m);
            idx /= m;
        }
        for (std::uint64_t seq_i = lo; seq_i < hi; ++seq_i) {
            det.reset();
            WindowCode w = 0;
            std::uint64_t at = 0;
            for (std::uint32_t r = 0; r < params.arity; ++r)
                w = w * m + symbols[at++];
            std::uint32_t pos = 1;
            std::uint32_t first = det.observe(w, pos);
            while (first == pos) {
                // A repeat always lands within the horizon: at most
                // state_count distinct windows exist.
                ++pos;
                w = (w % tail_modulus) * m + symbols[at++];
                first = det.observe(w, pos);
            }
            const std::uint64_t tau = static_cast<std::uint64_t>(pos) + params.arity - 1;
            const std::uint64_t mu = static_cast<std::uint64_t>(first) + params.arity - 1;
            ++acc.joint[{mu, tau}];
            ++acc.tau[tau];
            ++acc.period[pos - first];
            for (std::uint64_t i = 0; i < horizon; ++i) {
                if (++symbols[i] < m) break;
                symbols[i] = 0;
            }
        }
    });

    JointLaw law;
    law.joint_counts = std::move(total.joint);
    law.tau_counts = std::move(total.tau);
    law.period_counts = std::move(total.period);
    law.total_outcomes = n_seqs;
    return law;
}

}  // namespace rholab::oracle
