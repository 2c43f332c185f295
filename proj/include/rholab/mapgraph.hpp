#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "rholab/core.hpp"
#include "rholab/seqsim.hpp"

namespace rholab::mapgraph {

enum class MapMode { dense, lazy };

// A map from window codes to next symbols. Dense mode materializes all
// state_count entries; lazy mode derives each entry on demand from a map
// seed, so arbitrarily large state spaces stay walkable. Both modes produce
// the same uniform law over maps.
class MapTable {
  public:
    static constexpr std::uint64_t kDefaultDenseBudget = 100'000'000;

    static MapTable build(const Params& params, RngStream& stream,
                          MapMode mode = MapMode::dense,
                          std::uint64_t dense_budget = kDefaultDenseBudget);
    static MapTable from_values(const Params& params, std::vector<std::uint32_t> values);

    std::uint32_t value_at(WindowCode code) const;
    WindowCode successor(WindowCode code) const;

    MapMode mode() const { return mode_; }
    const Params& params() const { return params_; }
    const std::vector<std::uint32_t>& values() const;

  private:
    explicit MapTable(const Params& params) : params_(params) {}

    Params params_;
    MapMode mode_ = MapMode::dense;
    std::vector<std::uint32_t> values_;  // dense only
    std::uint64_t map_seed_ = 0;         // lazy only
};

// Reusable buffers for the functional graph census.
struct CensusScratch {
    std::vector<std::uint8_t> color;
    std::vector<std::uint32_t> pos_on_path;
    std::vector<WindowCode> path;
};

// Decomposes the functional graph succ(c) = roll(c, values[c]) into cycles
// and tails. On return tail[c] is the number of steps from c to its cycle
// and cycle_len[c] the length of that cycle; cycle_hist (if non-null)
// accumulates cycle-length -> count. Returns the number of cycles.
std::uint64_t census_into(const Params& params, std::span<const std::uint32_t> values,
                          std::span<std::uint32_t> tail, std::span<std::uint32_t> cycle_len,
                          std::map<std::uint64_t, std::uint64_t>* cycle_hist,
                          CensusScratch& scratch);

struct GraphStats {
    std::uint64_t tau_star = 0;     // max over seeds of the rho length
    double mean_tau = 0;            // mean over all seed windows
    std::uint64_t n_cycles = 0;
    std::map<std::uint64_t, std::uint64_t> cycle_length_hist;
    double frac_seeds_period1 = 0;  // seeds whose orbit ends on a 1-cycle
    bool has_diag_fixed_point = false;
};

// Whole-graph statistics; requires a dense table.
GraphStats analyze_graph(const MapTable& table);

// Iterates the window dynamics from a seed window until the first state
// repeat; same index convention as the sequence sampler.
seqsim::RhoResult trajectory(const MapTable& table, WindowCode seed);
seqsim::RhoResult trajectory(const MapTable& table, WindowCode seed,
                             FirstRepeatDetector& det);

// Draws a fresh dense map (entries in code order) and then a uniform seed
// window from the same stream, and walks it.
seqsim::RhoResult sample_map_trajectory(const Params& params, RngStream& stream);
seqsim::RhoResult sample_map_trajectory(const Params& params, RngStream& stream,
                                        FirstRepeatDetector& det,
                                        std::vector<std::uint32_t>& value_scratch);

struct DiagEstimate {
    double estimate = 0;
    double stderr_ = 0;
    std::uint64_t n_maps = 0;
};

// Monte Carlo probability that a random map sends some constant window
// (d, d, ..., d) to its own symbol d. Only the m diagonal entries are drawn;
// their joint law does not depend on the window size.
DiagEstimate diag_fixed_point_prob(std::uint32_t alphabet_size, std::uint64_t n_maps,
                                   std::uint64_t master_seed, unsigned workers = 0);

}  // namespace rholab::mapgraph
