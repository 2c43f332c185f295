#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rholab::stats {

struct KsResult {
    double d = 0;
    double p_value = 1;
    // Asymptotic p-values are marked approximate below 35 samples.
    bool approximate = false;
};

struct ChiSquareResult {
    double statistic = 0;
    std::uint64_t dof = 0;
    double p_value = 1;
};

struct StatSummary {
    std::uint64_t n = 0;
    double mean = 0;
    double variance = 0;  // unbiased sample variance
    double se_mean = 0;
    double se_variance = 0;
    std::optional<KsResult> ks;
    std::map<std::string, double> extra;
};

// One-sample Kolmogorov-Smirnov statistic against a known CDF, with the
// asymptotic p-value series. Throws std::domain_error on an empty sample.
KsResult ks_test(std::vector<double> samples, const std::function<double(double)>& cdf);

// Pearson goodness of fit. Bins whose expected count falls below 5 are merged
// left to right; the trailing remainder merges into the last kept bin.
// Throws std::domain_error on length mismatch or an empty sample.
ChiSquareResult chi_square_gof(const std::vector<std::uint64_t>& observed,
                               const std::vector<double>& expected_probs);

// Regularized upper incomplete gamma Q(a, x); series for x < a+1, continued
// fraction otherwise.
double gamma_q(double a, double x);

// e^(-lambda) lambda^j / j!, evaluated in log space.
double poisson_pmf(double lambda, std::uint64_t j);

// Sample Pearson correlation; 0 when either side is constant.
double pearson_corr(const std::vector<double>& xs, const std::vector<double>& ys);

// Moments with standard errors (variance standard error via the fourth
// central moment).
StatSummary summarize(const std::vector<double>& xs);

// Half the L1 distance between two pmfs over the union of their supports.
// Each input must sum to 1 within 1e-9 (std::domain_error otherwise).
template <class Key>
double tv_distance(const std::map<Key, double>& p, const std::map<Key, double>& q) {
    auto check = [](const std::map<Key, double>& pmf) {
        double total = 0;
        for (const auto& [key, prob] : pmf) {
            (void)key;
            if (prob < 0) throw std::domain_error("pmf has a negative entry");
            total += prob;
        }
        if (std::fabs(total - 1.0) > 1e-9)
            throw std::domain_error("pmf does not sum to 1 within 1e-9");
    };
    check(p);
    check(q);
    double l1 = 0;
    auto ip = p.begin();
    auto iq = q.begin();
    while (ip != p.end() || iq != q.end()) {
        if (iq == q.end() || (ip != p.end() && ip->first < iq->first)) {
            l1 += ip->second;
            ++ip;
        } else if (ip == p.end() || iq->first < ip->first) {
            l1 += iq->second;
            ++iq;
        } else {
            l1 += std::fabs(ip->second - iq->second);
            ++ip;
            ++iq;
        }
    }
    return 0.5 * l1;
}

}  // namespace rholab::stats
