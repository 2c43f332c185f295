#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace rholab {

// Requested computation exceeds the configured size budget.
class CapacityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Operation asked for an arity it does not support.
class UnsupportedArityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A finite symbol source ran dry before the trajectory closed.
class IncompleteTrajectoryError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Packed base-m encoding of a k-symbol window; earliest symbol most
// significant, so a shift is a single mod/multiply/add.
using WindowCode = std::uint64_t;

// Problem size: alphabet [0, m), arity k, derived state count m^k.
struct Params {
    std::uint32_t alphabet_size = 1;
    std::uint32_t arity = 1;
    std::uint64_t state_count = 1;

    // std::domain_error when either input is zero; CapacityError when m^k
    // does not fit in 64 bits.
    static Params create(std::uint32_t alphabet_size, std::uint32_t arity);
};

// Positional encoding: sum of symbols[r] * m^(k-1-r). Symbols must lie in
// [0, m) and exactly k of them must be given.
WindowCode encode_window(const std::vector<std::uint32_t>& symbols, const Params& params);

// Inverse of encode_window; code must lie in [0, state_count).
std::vector<std::uint32_t> decode_window(WindowCode code, const Params& params);

// Drops the earliest symbol and appends x_new: (code mod m^(k-1)) * m + x_new.
WindowCode roll_window(WindowCode code, std::uint32_t x_new, const Params& params);

// Counter-based deterministic stream. Every draw is a pure function of
// (master_seed, stream_index, draw counter): stream selection is O(1) and
// trials can execute in any order without affecting results.
class RngStream {
public:
    RngStream(std::uint64_t master_seed, std::uint64_t stream_index);

    std::uint64_t next_u64();

    // Uniform on [0, n); unbiased rejection against the native 64-bit range.
    std::uint64_t next_index(std::uint64_t n);

    // Uniform symbol on [0, m); m = 1 short-circuits without consuming state.
    std::uint32_t next_symbol(std::uint32_t alphabet_size);

    // Uniform on the open interval (0, 1); never returns an endpoint.
    double next_unit_open();

private:
    std::uint64_t base_;
    std::uint64_t counter_;
};

// Tracks the first-seen position of window codes along one trajectory.
// Positions are 1-based. Dense epoch-stamped arrays are preallocated when the
// code space is small enough, making reset() O(1) so one detector can be
// reused across many trials; otherwise a hash map is used.
class FirstRepeatDetector {
public:
    explicit FirstRepeatDetector(std::uint64_t state_count);

    void reset();

    // Records code at position pos if unseen and returns pos; otherwise
    // returns the position of its first occurrence (< pos).
    std::uint32_t observe(WindowCode code, std::uint32_t pos);

private:
    static constexpr std::uint64_t kDenseLimit = std::uint64_t{1} << 22;

    bool dense_;
    std::uint32_t epoch_ = 0;
    std::vector<std::uint32_t> stamp_;
    std::vector<std::uint32_t> first_pos_;
    std::unordered_map<std::uint64_t, std::uint32_t> seen_;
};

}  // namespace rholab
