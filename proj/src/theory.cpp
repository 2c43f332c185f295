#include "rholab/theory.hpp"

#include <cmath>

namespace rholab::theory {

namespace {

// m^k as long double; exact whenever m^k fits the 64-bit significand.
// Returns false instead of overflowing.
bool state_count_ld(const Params& p, long double& out) {
    long double mk = 1.0L;
    for (std::uint32_t r = 0; r < p.arity; ++r) {
        mk *= static_cast<long double>(p.alphabet_size);
        if (mk > 1e300L) return false;
    }
    out = mk;
    return true;
}

// m^-k; direct division when m^k is representable, log space otherwise
// (k ln m beyond double range would silently overflow).
double inverse_state_count(const Params& p) {
    long double mk;
    if (state_count_ld(p, mk)) return static_cast<double>(1.0L / mk);
    return std::exp(-static_cast<double>(p.arity) *
                    std::log(static_cast<double>(p.alphabet_size)));
}

}  // namespace

TauMoments asymptotic_tau_moments(const Params& params) {
    const double log_m = std::log(static_cast<double>(params.alphabet_size));
    const double k = static_cast<double>(params.arity);
    const double pi = 3.14159265358979323846;
    TauMoments r;
    r.mean = std::exp(0.5 * k * log_m) * std::sqrt(pi / 2.0);
    r.variance = (2.0 - pi / 2.0) * std::exp(k * log_m);
    r.heuristic = params.arity != 2;
    return r;
}

double exponential_tail(double x) {
    if (x < 0) throw std::domain_error("tail argument must be nonnegative");
    return std::exp(-x);
}

double birthday_survival(std::uint64_t population, std::uint64_t draws) {
    if (population < 1) throw std::domain_error("population must be at least 1");
    if (draws > population) return 0.0;
    double p = 1.0;
    const double pop = static_cast<double>(population);
    for (std::uint64_t i = 1; i < draws; ++i) p *= 1.0 - static_cast<double>(i) / pop;
    return p;
}

TheoryBounds chen_stein_bounds(const Params& params, double x) {
    if (!(x > 0)) throw std::domain_error("threshold x must be positive");
    long double mk;
    if (!state_count_ld(params, mk))
        throw CapacityError("window count floor(sqrt(2 m^k x)) exceeds the supported range");
    const long double target = 2.0L * mk * static_cast<long double>(x);
    const long double cap = 0x1.0p86;  // keeps N below 2^43
    if (!(target < cap))
        throw CapacityError("window count floor(sqrt(2 m^k x)) exceeds the supported range");

    // Floor of the square root with an integer correction pass, so values
    // landing exactly on an integer are not lost to rounding.
    std::uint64_t n = static_cast<std::uint64_t>(sqrtl(target));
    while (static_cast<long double>(n + 1) * static_cast<long double>(n + 1) <= target) ++n;
    while (n > 0 && static_cast<long double>(n) * static_cast<long double>(n) > target) --n;

    const double inv_mk = inverse_state_count(params);
    const double k = static_cast<double>(params.arity);
    const double nd = static_cast<double>(n);
    const double pairs = 0.5 * nd * (nd - 1.0);
    TheoryBounds b;
    b.n_windows = n;
    b.lambda = pairs * inv_mk;
    b.b1 = b.lambda * (8.0 * k * nd) * inv_mk;
    b.b2 = pairs * (16.0 * k * k * inv_mk / static_cast<double>(params.alphabet_size) +
                    8.0 * k * nd * inv_mk * inv_mk);
    b.pair_count_alt = 0.5 * (nd + 1.0) * nd;
    return b;
}

HazardMoments hazard_H_moments(std::uint64_t steps, std::uint64_t alphabet_size) {
    if (steps < 2) throw std::domain_error("at least two steps are required");
    if (alphabet_size < 1) throw std::domain_error("alphabet size must be at least 1");
    const double pairs = 0.5 * static_cast<double>(steps) * static_cast<double>(steps - 1);
    const double m = static_cast<double>(alphabet_size);
    HazardMoments r;
    r.mean = pairs / (m * m);
    r.variance = pairs * (1.0 / (m * m * m) - 1.0 / (m * m * m * m));
    return r;
}

double sample_conditioned_exp(double x, RngStream& stream) {
    if (!(x > 0)) throw std::domain_error("conditioning bound must be positive");
    const double u = stream.next_unit_open();
    // expm1(-inf) = -1 reduces this to a plain mean-1 exponential draw.
    return -std::log1p(u * std::expm1(-x));
}

double window_collision_prob(const Params& params, std::uint64_t i, std::uint64_t j) {
    if (i >= j) throw std::domain_error("window indices must satisfy i < j");
    return inverse_state_count(params);
}

}  // namespace rholab::theory
