#include "rholab/poisson_experiment.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "rholab/parallel.hpp"
#include "rholab/stats.hpp"

namespace rholab::poisson_experiment {

namespace {

constexpr std::uint64_t kWindowBudget = 100'000'000;

std::uint64_t pairs_in_sorted(std::vector<WindowCode>& codes) {
    std::sort(codes.begin(), codes.end());
    std::uint64_t z = 0;
    std::size_t i = 0;
    while (i < codes.size()) {
        std::size_t j = i + 1;
        while (j < codes.size() && codes[j] == codes[i]) ++j;
        const std::uint64_t mult = j - i;
        z += mult * (mult - 1) / 2;
        i = j;
    }
    return z;
}

std::uint64_t draw_z(const Params& params, std::uint64_t n_windows, RngStream& stream,
                     std::vector<WindowCode>& scratch) {
    const std::uint32_t m = params.alphabet_size;
    const std::uint64_t tail_modulus = params.state_count / m;
    scratch.clear();
    WindowCode w = 0;
    for (std::uint32_t r = 0; r < params.arity; ++r)
        w = w * m + stream.next_symbol(m);
    scratch.push_back(w);
    for (std::uint64_t i = 1; i < n_windows; ++i) {
        w = (w % tail_modulus) * m + stream.next_symbol(m);
        scratch.push_back(w);
    }
    return pairs_in_sorted(scratch);
}

}  // namespace

std::uint64_t collision_pairs(std::span<const std::uint32_t> symbols, const Params& params) {
    if (symbols.size() < params.arity)
        throw std::domain_error("need at least one full window of symbols");
    const std::uint32_t m = params.alphabet_size;
    const std::uint64_t tail_modulus = params.state_count / m;
    std::vector<WindowCode> codes;
    codes.reserve(symbols.size() - params.arity + 1);
    WindowCode w = 0;
    for (std::uint32_t r = 0; r < params.arity; ++r) {
        if (symbols[r] >= m) throw std::domain_error("symbol out of range");
        w = w * m + symbols[r];
    }
    codes.push_back(w);
    for (std::size_t i = params.arity; i < symbols.size(); ++i) {
        if (symbols[i] >= m) throw std::domain_error("symbol out of range");
        w = (w % tail_modulus) * m + symbols[i];
        codes.push_back(w);
    }
    return pairs_in_sorted(codes);
}

CollisionRecord sample_Z(const Params& params, double x, RngStream& stream) {
    const theory::TheoryBounds bounds = theory::chen_stein_bounds(params, x);
    const std::uint64_t n_windows = bounds.n_windows + 1;
    if (n_windows > kWindowBudget)
        throw CapacityError("collision experiment needs " + std::to_string(n_windows) +
                            " windows, over the budget of " + std::to_string(kWindowBudget));
    CollisionRecord rec;
    rec.params = params;
    rec.x = x;
    rec.n_windows = n_windows;
    std::vector<WindowCode> scratch;
    rec.z = draw_z(params, n_windows, stream, scratch);
    return rec;
}

PoissonGap poisson_gap(const Params& params, double x, std::uint64_t n_trials,
                       std::uint64_t master_seed, unsigned workers) {
    if (n_trials == 0) throw std::domain_error("trial count must be positive");
    const theory::TheoryBounds bounds = theory::chen_stein_bounds(params, x);
    const std::uint64_t n_windows = bounds.n_windows + 1;
    if (n_windows > kWindowBudget)
        throw CapacityError("collision experiment needs " + std::to_string(n_windows) +
                            " windows, over the budget of " + std::to_string(kWindowBudget));

    auto zs = run_indexed_trials<std::uint64_t>(
        n_trials, workers, [&](std::uint64_t i) {
            thread_local std::vector<WindowCode> scratch;
            RngStream stream(master_seed, i);
            return draw_z(params, n_windows, stream, scratch);
        });

    std::map<std::uint64_t, std::uint64_t> counts;
    for (std::uint64_t z : zs) ++counts[z];

    PoissonGap gap;
    gap.lambda = bounds.lambda;
    gap.bound_b1_b2 = bounds.b1 + bounds.b2;
    gap.n_windows = n_windows;
    gap.n_trials = n_trials;

    const double n = static_cast<double>(n_trials);
    for (const auto& [z, c] : counts) gap.z_pmf[z] = static_cast<double>(c) / n;

    // Truncate the Poisson reference far into its tail so the remainder is
    // numerically negligible, then fold that remainder into the distance.
    std::uint64_t truncation = static_cast<std::uint64_t>(
        std::ceil(gap.lambda + 40.0 * std::sqrt(gap.lambda) + 40.0));
    if (!counts.empty()) truncation = std::max(truncation, counts.rbegin()->first);

    double l1 = 0;
    double poisson_mass = 0;
    std::uint64_t support = 0;
    for (std::uint64_t j = 0; j <= truncation; ++j) {
        const double q = stats::poisson_pmf(gap.lambda, j);
        poisson_mass += q;
        auto it = gap.z_pmf.find(j);
        const double p = it == gap.z_pmf.end() ? 0.0 : it->second;
        l1 += std::abs(p - q);
        if (p > 0 || q > 1e-9) ++support;
    }
    l1 += 1.0 - std::min(1.0, poisson_mass);
    gap.tv_empirical = 0.5 * l1;
    gap.tv_error_bar = std::sqrt(static_cast<double>(support) / n);

    auto it0 = gap.z_pmf.find(0);
    gap.p0_hat = it0 == gap.z_pmf.end() ? 0.0 : it0->second;
    gap.p0_gap = std::abs(gap.p0_hat - std::exp(-gap.lambda));
    return gap;
}

}  // namespace rholab::poisson_experiment
