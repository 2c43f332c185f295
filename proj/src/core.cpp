#include "rholab/core.hpp"

#include <algorithm>
#include <string>

namespace rholab {

namespace {

constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
}

}  // namespace

Params Params::create(std::uint32_t alphabet_size, std::uint32_t arity) {
    if (alphabet_size < 1) throw std::domain_error("alphabet size must be at least 1");
    if (arity < 1) throw std::domain_error("arity must be at least 1");
    std::uint64_t state_count = 1;
    for (std::uint32_t r = 0; r < arity; ++r) {
        if (alphabet_size != 0 &&
            state_count > std::numeric_limits<std::uint64_t>::max() / alphabet_size) {
            throw CapacityError("state count m^k overflows 64 bits for m=" +
                                std::to_string(alphabet_size) + ", k=" + std::to_string(arity));
        }
        state_count *= alphabet_size;
    }
    return Params{alphabet_size, arity, state_count};
}

WindowCode encode_window(const std::vector<std::uint32_t>& symbols, const Params& params) {
    if (symbols.size() != params.arity)
        throw std::domain_error("window must contain exactly k symbols");
    WindowCode code = 0;
    for (std::uint32_t s : symbols) {
        if (s >= params.alphabet_size) throw std::domain_error("symbol out of range");
        code = code * params.alphabet_size + s;
    }
    return code;
}

std::vector<std::uint32_t> decode_window(WindowCode code, const Params& params) {
    if (code >= params.state_count) throw std::domain_error("window code out of range");
    std::vector<std::uint32_t> symbols(params.arity);
    for (std::uint32_t r = params.arity; r-- > 0;) {
        symbols[r] = static_cast<std::uint32_t>(code % params.alphabet_size);
        code /= params.alphabet_size;
    }
    return symbols;
}

WindowCode roll_window(WindowCode code, std::uint32_t x_new, const Params& params) {
    if (code >= params.state_count) throw std::domain_error("window code out of range");
    if (x_new >= params.alphabet_size) throw std::domain_error("symbol out of range");
    const std::uint64_t tail_modulus = params.state_count / params.alphabet_size;  // m^(k-1)
    return (code % tail_modulus) * params.alphabet_size + x_new;
}

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t stream_index)
    : base_(mix64(mix64(master_seed + kGamma) ^ (stream_index + kGamma))), counter_(0) {}

std::uint64_t RngStream::next_u64() { return mix64(base_ + kGamma * ++counter_); }

std::uint64_t RngStream::next_index(std::uint64_t n) {
    if (n < 1) throw std::domain_error("range must be at least 1");
    if (n == 1) return 0;
    // 2^64 mod n; shifting the accepted range down by rem leaves an exact
    // multiple of n, so every residue has the same number of preimages.
    const std::uint64_t rem = (0 - n) % n;
    for (;;) {
        const std::uint64_t u = next_u64();
        if (u >= rem) return (u - rem) % n;
    }
}

std::uint32_t RngStream::next_symbol(std::uint32_t alphabet_size) {
    return static_cast<std::uint32_t>(next_index(alphabet_size));
}

double RngStream::next_unit_open() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

FirstRepeatDetector::FirstRepeatDetector(std::uint64_t state_count)
    : dense_(state_count <= kDenseLimit) {
    if (dense_) {
        stamp_.assign(static_cast<std::size_t>(state_count), 0);
        first_pos_.assign(static_cast<std::size_t>(state_count), 0);
    }
    reset();
}

void FirstRepeatDetector::reset() {
    if (dense_) {
        if (++epoch_ == 0) {
            std::fill(stamp_.begin(), stamp_.end(), 0);
            epoch_ = 1;
        }
    } else {
        seen_.clear();
    }
}

std::uint32_t FirstRepeatDetector::observe(WindowCode code, std::uint32_t pos) {
    if (dense_) {
        if (stamp_[code] == epoch_) return first_pos_[code];
        stamp_[code] = epoch_;
        first_pos_[code] = pos;
        return pos;
    }
    auto [it, inserted] = seen_.emplace(code, pos);
    return inserted ? pos : it->second;
}

}  // namespace rholab
