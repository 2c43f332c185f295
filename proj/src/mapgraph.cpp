#include "rholab/mapgraph.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>
#include <string>

#include "rholab/parallel.hpp"

namespace rholab::mapgraph {

MapTable MapTable::build(const Params& params, RngStream& stream, MapMode mode,
                         std::uint64_t dense_budget) {
    MapTable t(params);
    t.mode_ = mode;
    if (mode == MapMode::dense) {
        if (params.state_count > dense_budget)
            throw CapacityError("dense map needs " + std::to_string(params.state_count) +
                                " entries, over the budget of " +
                                std::to_string(dense_budget));
        t.values_.resize(params.state_count);
        for (WindowCode c = 0; c < params.state_count; ++c)
            t.values_[c] = stream.next_symbol(params.alphabet_size);
    } else {
        t.map_seed_ = stream.next_u64();
    }
    return t;
}

MapTable MapTable::from_values(const Params& params, std::vector<std::uint32_t> values) {
    if (values.size() != params.state_count)
        throw std::domain_error("value table size does not match the state count");
    for (std::uint32_t v : values)
        if (v >= params.alphabet_size) throw std::domain_error("map value out of range");
    MapTable t(params);
    t.mode_ = MapMode::dense;
    t.values_ = std::move(values);
    return t;
}

std::uint32_t MapTable::value_at(WindowCode code) const {
    if (code >= params_.state_count) throw std::domain_error("window code out of range");
    if (mode_ == MapMode::dense) return values_[code];
    // One dedicated stream per code keeps lazy lookups order-independent.
    RngStream per_code(map_seed_, code);
    return per_code.next_symbol(params_.alphabet_size);
}

WindowCode MapTable::successor(WindowCode code) const {
    return roll_window(code, value_at(code), params_);
}

const std::vector<std::uint32_t>& MapTable::values() const {
    if (mode_ != MapMode::dense)
        throw std::domain_error("a lazy map has no materialized value table");
    return values_;
}

std::uint64_t census_into(const Params& params, std::span<const std::uint32_t> values,
                          std::span<std::uint32_t> tail, std::span<std::uint32_t> cycle_len,
                          std::map<std::uint64_t, std::uint64_t>* cycle_hist,
                          CensusScratch& scratch) {
    const std::uint64_t n = params.state_count;
    if (values.size() != n || tail.size() != n || cycle_len.size() != n)
        throw std::domain_error("census spans must cover every window code");
    const std::uint64_t tail_modulus = n / params.alphabet_size;
    constexpr std::uint8_t kWhite = 0, kGray = 1, kBlack = 2;
    scratch.color.assign(n, kWhite);
    scratch.pos_on_path.resize(n);
    scratch.path.clear();

    std::uint64_t n_cycles = 0;
    for (WindowCode start = 0; start < n; ++start) {
        if (scratch.color[start] != kWhite) continue;
        scratch.path.clear();
        WindowCode c = start;
        while (scratch.color[c] == kWhite) {
            scratch.color[c] = kGray;
            scratch.pos_on_path[c] = static_cast<std::uint32_t>(scratch.path.size());
            scratch.path.push_back(c);
            c = (c % tail_modulus) * params.alphabet_size + values[c];
        }
        const auto len = static_cast<std::uint32_t>(scratch.path.size());
        if (scratch.color[c] == kGray) {
            // The walk closed on itself: path[cut..] is a brand-new cycle.
            const std::uint32_t cut = scratch.pos_on_path[c];
            const std::uint32_t cyc = len - cut;
            ++n_cycles;
            if (cycle_hist) ++(*cycle_hist)[cyc];
            for (std::uint32_t i = cut; i < len; ++i) {
                const WindowCode v = scratch.path[i];
                tail[v] = 0;
                cycle_len[v] = cyc;
                scratch.color[v] = kBlack;
            }
            for (std::uint32_t i = 0; i < cut; ++i) {
                const WindowCode v = scratch.path[i];
                tail[v] = cut - i;
                cycle_len[v] = cyc;
                scratch.color[v] = kBlack;
            }
        } else {
            // The walk ran into already-settled territory.
            const std::uint32_t base = tail[c];
            const std::uint32_t cyc = cycle_len[c];
            for (std::uint32_t i = 0; i < len; ++i) {
                const WindowCode v = scratch.path[i];
                tail[v] = base + (len - i);
                cycle_len[v] = cyc;
                scratch.color[v] = kBlack;
            }
        }
    }
    return n_cycles;
}

GraphStats analyze_graph(const MapTable& table) {
    const Params& p = table.params();
    const std::vector<std::uint32_t>& values = table.values();  // throws for lazy maps
    const std::uint64_t n = p.state_count;
    std::vector<std::uint32_t> tail(n), cycle_len(n);
    CensusScratch scratch;
    GraphStats g;
    g.n_cycles = census_into(p, values, tail, cycle_len, &g.cycle_length_hist, scratch);

    std::uint64_t sum_rho = 0, max_rho = 0, period1_seeds = 0;
    for (std::uint64_t c = 0; c < n; ++c) {
        const std::uint64_t rho = static_cast<std::uint64_t>(tail[c]) + cycle_len[c];
        sum_rho += rho;
        max_rho = std::max(max_rho, rho);
        if (cycle_len[c] == 1) ++period1_seeds;
    }
    g.tau_star = max_rho + p.arity;
    g.mean_tau = static_cast<double>(sum_rho) / static_cast<double>(n) + p.arity;
    g.frac_seeds_period1 = static_cast<double>(period1_seeds) / static_cast<double>(n);

    // A window fixed point is exactly a constant window mapped to its own
    // symbol: code d * (1 + m + ... + m^(k-1)).
    std::uint64_t diag_step = 0, power = 1;
    for (std::uint32_t r = 0; r < p.arity; ++r) {
        diag_step += power;
        power *= p.alphabet_size;
    }
    for (std::uint32_t d = 0; d < p.alphabet_size; ++d) {
        if (values[d * diag_step] == d) {
            g.has_diag_fixed_point = true;
            break;
        }
    }
    return g;
}

seqsim::RhoResult trajectory(const MapTable& table, WindowCode seed) {
    FirstRepeatDetector det(table.params().state_count);
    return trajectory(table, seed, det);
}

seqsim::RhoResult trajectory(const MapTable& table, WindowCode seed,
                             FirstRepeatDetector& det) {
    const Params& p = table.params();
    if (seed >= p.state_count) throw std::domain_error("seed window code out of range");
    det.reset();
    WindowCode w = seed;
    std::uint32_t pos = 1;
    std::uint32_t first = det.observe(w, pos);
    while (first == pos) {
        if (pos == std::numeric_limits<std::uint32_t>::max())
            throw CapacityError("trajectory length exceeds the supported range");
        ++pos;
        w = table.successor(w);
        first = det.observe(w, pos);
    }
    seqsim::RhoResult r;
    r.tau = static_cast<std::uint64_t>(pos) + p.arity - 1;
    r.mu = static_cast<std::uint64_t>(first) + p.arity - 1;
    r.period = pos - first;
    r.tail = first - 1;
    return r;
}

seqsim::RhoResult sample_map_trajectory(const Params& params, RngStream& stream) {
    FirstRepeatDetector det(params.state_count);
    std::vector<std::uint32_t> values;
    return sample_map_trajectory(params, stream, det, values);
}

seqsim::RhoResult sample_map_trajectory(const Params& params, RngStream& stream,
                                        FirstRepeatDetector& det,
                                        std::vector<std::uint32_t>& value_scratch) {
    value_scratch.resize(params.state_count);
    for (WindowCode c = 0; c < params.state_count; ++c)
        value_scratch[c] = stream.next_symbol(params.alphabet_size);
    const WindowCode seed = stream.next_index(params.state_count);

    // Inline walk over the scratch table to avoid building a MapTable per trial.
    const std::uint64_t tail_modulus = params.state_count / params.alphabet_size;
    det.reset();
    WindowCode w = seed;
    std::uint32_t pos = 1;
    std::uint32_t first = det.observe(w, pos);
    while (first == pos) {
        ++pos;
        w = (w % tail_modulus) * params.alphabet_size + value_scratch[w];
        first = det.observe(w, pos);
    }
    seqsim::RhoResult r;
    r.tau = static_cast<std::uint64_t>(pos) + params.arity - 1;
    r.mu = static_cast<std::uint64_t>(first) + params.arity - 1;
    r.period = pos - first;
    r.tail = first - 1;
    return r;
}

DiagEstimate diag_fixed_point_prob(std::uint32_t alphabet_size, std::uint64_t n_maps,
                                   std::uint64_t master_seed, unsigned workers) {
    if (alphabet_size == 0) throw std::domain_error("alphabet size must be positive");
    if (n_maps == 0) throw std::domain_error("map count must be positive");
    auto hits = run_indexed_trials<std::uint8_t>(
        n_maps, workers, [&](std::uint64_t i) -> std::uint8_t {
            RngStream stream(master_seed, i);
            for (std::uint32_t d = 0; d < alphabet_size; ++d)
                if (stream.next_symbol(alphabet_size) == d) return 1;
            return 0;
        });
    std::uint64_t total = 0;
    for (std::uint8_t h : hits) total += h;
    DiagEstimate e;
    e.n_maps = n_maps;
    e.estimate = static_cast<double>(total) / static_cast<double>(n_maps);
    e.stderr_ = std::sqrt(e.estimate * (1.0 - e.estimate) / static_cast<double>(n_maps));
    return e;
}

}  // namespace rholab::mapgraph
