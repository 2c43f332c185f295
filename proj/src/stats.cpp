#include "rholab/stats.hpp"

#include <algorithm>
#include <limits>

namespace rholab::stats {

KsResult ks_test(std::vector<double> samples, const std::function<double(double)>& cdf) {
    if (samples.empty()) throw std::domain_error("KS test requires at least one sample");
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double f = cdf(samples[i]);
        const double hi = (static_cast<double>(i) + 1.0) / n - f;
        const double lo = f - static_cast<double>(i) / n;
        d = std::max({d, hi, lo});
    }
    // Asymptotic Kolmogorov distribution with Stephens' effective sample-size
    // correction; first 100 terms of the alternating series.
    const double lambda = d * (std::sqrt(n) + 0.12 + 0.11 / std::sqrt(n));
    double q = 0;
    for (int j = 1; j <= 100; ++j) {
        const double term = std::exp(-2.0 * j * j * lambda * lambda);
        q += (j % 2 == 1) ? 2.0 * term : -2.0 * term;
    }
    KsResult r;
    r.d = d;
    r.p_value = std::clamp(q, 0.0, 1.0);
    r.approximate = samples.size() < 35;
    return r;
}

double gamma_q(double a, double x) {
    if (a <= 0 || x < 0) throw std::domain_error("gamma_q requires a > 0, x >= 0");
    if (x == 0) return 1.0;
    if (x < a + 1.0) {
        // Lower series: P(a,x) = e^(-x) x^a / Gamma(a) * sum x^n / (a)_{n+1}
        double term = 1.0 / a;
        double sum = term;
        double ap = a;
        for (int i = 0; i < 1000; ++i) {
            ap += 1.0;
            term *= x / ap;
            sum += term;
            if (std::fabs(term) < std::fabs(sum) * 1e-16) break;
        }
        const double p = sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
        return std::clamp(1.0 - p, 0.0, 1.0);
    }
    // Upper continued fraction (modified Lentz).
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 1000; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < 1e-16) break;
    }
    const double q = h * std::exp(-x + a * std::log(x) - std::lgamma(a));
    return std::clamp(q, 0.0, 1.0);
}

ChiSquareResult chi_square_gof(const std::vector<std::uint64_t>& observed,
                               const std::vector<double>& expected_probs) {
    if (observed.size() != expected_probs.size())
        throw std::domain_error("observed and expected lengths differ");
    if (observed.empty()) throw std::domain_error("chi-square requires at least one bin");
    std::uint64_t total = 0;
    for (std::uint64_t o : observed) total += o;
    if (total < 1) throw std::domain_error("chi-square requires at least one observation");

    const double n = static_cast<double>(total);
    std::vector<double> merged_exp;
    std::vector<double> merged_obs;
    double acc_exp = 0;
    double acc_obs = 0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        acc_exp += expected_probs[i] * n;
        acc_obs += static_cast<double>(observed[i]);
        if (acc_exp >= 5.0) {
            merged_exp.push_back(acc_exp);
            merged_obs.push_back(acc_obs);
            acc_exp = 0;
            acc_obs = 0;
        }
    }
    if (acc_exp > 0 || acc_obs > 0) {
        if (merged_exp.empty()) {
            merged_exp.push_back(acc_exp);
            merged_obs.push_back(acc_obs);
        } else {
            merged_exp.back() += acc_exp;
            merged_obs.back() += acc_obs;
        }
    }

    double statistic = 0;
    for (std::size_t i = 0; i < merged_exp.size(); ++i) {
        const double diff = merged_obs[i] - merged_exp[i];
        statistic += diff * diff / merged_exp[i];
    }
    ChiSquareResult r;
    r.statistic = statistic;
    r.dof = merged_exp.size() > 1 ? merged_exp.size() - 1 : 1;
    r.p_value = gamma_q(static_cast<double>(r.dof) / 2.0, statistic / 2.0);
    return r;
}

double poisson_pmf(double lambda, std::uint64_t j) {
    if (lambda < 0) throw std::domain_error("poisson mean must be nonnegative");
    if (lambda == 0) return j == 0 ? 1.0 : 0.0;
    const double jd = static_cast<double>(j);
    return std::exp(-lambda + jd * std::log(lambda) - std::lgamma(jd + 1.0));
}

double pearson_corr(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size()) throw std::domain_error("correlation inputs differ in length");
    if (xs.size() < 2) throw std::domain_error("correlation requires at least two points");
    const double n = static_cast<double>(xs.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, syy = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double dx = xs[i] - mx;
        const double dy = ys[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx == 0 || syy == 0) return 0;
    return sxy / std::sqrt(sxx * syy);
}

StatSummary summarize(const std::vector<double>& xs) {
    if (xs.empty()) throw std::domain_error("summary requires at least one sample");
    StatSummary s;
    s.n = xs.size();
    const double n = static_cast<double>(xs.size());
    double mean = 0;
    for (double x : xs) mean += x;
    mean /= n;
    double m2 = 0, m4 = 0;
    for (double x : xs) {
        const double d = x - mean;
        m2 += d * d;
        m4 += d * d * d * d;
    }
    s.mean = mean;
    if (xs.size() > 1) {
        s.variance = m2 / (n - 1);
        s.se_mean = std::sqrt(s.variance / n);
        m2 /= n;
        m4 /= n;
        // Var(s^2) = (m4 - (n-3)/(n-1) sigma^4) / n with central-moment estimates.
        const double v = (m4 - (n - 3.0) / (n - 1.0) * m2 * m2) / n;
        s.se_variance = v > 0 ? std::sqrt(v) : 0;
    }
    return s;
}

}  // namespace rholab::stats
