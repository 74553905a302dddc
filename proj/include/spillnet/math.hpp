#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

namespace spillnet {

inline constexpr double neg_inf = -std::numeric_limits<double>::infinity();

inline double logistic(double x) {
    if (x >= 0.0) {
        return 1.0 / (1.0 + std::exp(-x));
    }
    const double e = std::exp(x);
    return e / (1.0 + e);
}

inline double logit(double p) { return std::log(p) - std::log1p(-p); }

// log(1 + exp(x)) without overflow
inline double log1pexp(double x) {
    if (x > 33.0) return x;
    if (x < -37.0) return std::exp(x);
    return std::log1p(std::exp(x));
}

inline double log_sum_exp(std::span<const double> v) {
    double m = neg_inf;
    for (double x : v) m = std::max(m, x);
    if (!std::isfinite(m)) return m;
    double s = 0.0;
    for (double x : v) s += std::exp(x - m);
    return m + std::log(s);
}

// deterministic summation independent of accumulation chunking
inline double pairwise_sum(std::span<const double> v) {
    if (v.size() <= 8) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    const std::size_t half = v.size() / 2;
    return pairwise_sum(v.subspan(0, half)) + pairwise_sum(v.subspan(half));
}

inline double mean_of(std::span<const double> v) {
    if (v.empty()) throw std::invalid_argument("mean_of: empty");
    return pairwise_sum(v) / static_cast<double>(v.size());
}

inline double sample_sd(std::span<const double> v) {
    if (v.size() < 2) return 0.0;
    const double m = mean_of(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(v.size() - 1));
}

// type-7 quantile (linear interpolation between order statistics)
inline double quantile(std::vector<double> v, double prob) {
    if (v.empty()) throw std::invalid_argument("quantile: empty");
    if (prob < 0.0 || prob > 1.0) throw std::invalid_argument("quantile: prob outside [0,1]");
    std::sort(v.begin(), v.end());
    const double h = prob * static_cast<double>(v.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(h);
    if (lo + 1 >= v.size()) return v.back();
    const double w = h - static_cast<double>(lo);
    return v[lo] * (1.0 - w) + v[lo + 1] * w;
}

// Precomputed lgamma(k) for k in [0, n]; entry 0 is unused.
class LogGammaTable {
public:
    explicit LogGammaTable(int max_arg) : table_(static_cast<std::size_t>(max_arg) + 1) {
        table_[0] = std::numeric_limits<double>::infinity();
        for (int k = 1; k <= max_arg; ++k) table_[static_cast<std::size_t>(k)] = std::lgamma(static_cast<double>(k));
    }

    double operator()(int k) const { return table_[static_cast<std::size_t>(k)]; }

    // log C(n, k); requires 0 <= k <= n <= max_arg - 1
    double log_choose(int n, int k) const {
        return table_[static_cast<std::size_t>(n) + 1] - table_[static_cast<std::size_t>(k) + 1] -
               table_[static_cast<std::size_t>(n - k) + 1];
    }

    int max_arg() const { return static_cast<int>(table_.size()) - 1; }

private:
    std::vector<double> table_;
};

inline double log_choose(int n, int k) {
    if (k < 0 || k > n) return neg_inf;
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

// log Bin(k; n, p), handling p in {0, 1} exactly
inline double binomial_log_pmf(int k, int n, double p) {
    if (k < 0 || k > n) return neg_inf;
    if (p <= 0.0) return k == 0 ? 0.0 : neg_inf;
    if (p >= 1.0) return k == n ? 0.0 : neg_inf;
    return log_choose(n, k) + k * std::log(p) + (n - k) * std::log1p(-p);
}

inline double binomial_pmf(int k, int n, double p) { return std::exp(binomial_log_pmf(k, n, p)); }

}  // namespace spillnet
