#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "spillnet/math.hpp"
#include "spillnet/rng.hpp"

namespace spillnet {

// Degree prior with mean success probability mu and overdispersion rho.
// Variance is size*mu*(1-mu)*(1+(size-1)*rho); rho = 0 is exactly Binomial(size, mu).
struct BetaBinomialPrior {
    double mu = 0.5;
    double rho = 0.0;
    int size = 0;

    BetaBinomialPrior() = default;
    BetaBinomialPrior(double mu_, double rho_, int size_) : mu(mu_), rho(rho_), size(size_) {
        if (!(mu > 0.0 && mu < 1.0)) throw std::invalid_argument("BetaBinomialPrior: mu must be in (0,1)");
        if (!(rho >= 0.0 && rho < 1.0)) throw std::invalid_argument("BetaBinomialPrior: rho must be in [0,1)");
        if (size < 0) throw std::invalid_argument("BetaBinomialPrior: size must be nonnegative");
    }

    // shape parameters of the underlying Beta
    double shape_a() const { return mu * (1.0 - rho) / rho; }
    double shape_b() const { return (1.0 - mu) * (1.0 - rho) / rho; }

    double mean() const { return size * mu; }
    double variance() const { return size * mu * (1.0 - mu) * (1.0 + (size - 1) * rho); }
};

inline double bb_log_pmf(const BetaBinomialPrior& prior, int k) {
    if (k < 0 || k > prior.size) return neg_inf;
    if (prior.size == 0) return 0.0;
    if (prior.rho == 0.0) return binomial_log_pmf(k, prior.size, prior.mu);
    const double a = prior.shape_a();
    const double b = prior.shape_b();
    const int n = prior.size;
    // log C(n,k) + log B(k+a, n-k+b) - log B(a, b)
    return log_choose(n, k) + std::lgamma(k + a) + std::lgamma(n - k + b) - std::lgamma(n + a + b) -
           (std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
}

inline double bb_pmf(const BetaBinomialPrior& prior, int k) { return std::exp(bb_log_pmf(prior, k)); }

inline std::vector<double> bb_pmf_table(const BetaBinomialPrior& prior) {
    std::vector<double> out(static_cast<std::size_t>(prior.size) + 1);
    for (int k = 0; k <= prior.size; ++k) out[static_cast<std::size_t>(k)] = bb_pmf(prior, k);
    return out;
}

// Smallest d_max such that P(K <= d_max) >= 1 - tail_mass.
inline int truncated_support(const BetaBinomialPrior& prior, double tail_mass) {
    if (!(tail_mass > 0.0 && tail_mass <= 0.01)) {
        throw std::invalid_argument("truncated_support: tail_mass must be in (0, 0.01]");
    }
    double cdf = 0.0;
    for (int k = 0; k <= prior.size; ++k) {
        cdf += bb_pmf(prior, k);
        if (cdf >= 1.0 - tail_mass) return k;
    }
    return prior.size;
}

struct MomentMatchResult {
    BetaBinomialPrior prior;
    bool underdispersed = false;  // sample variance below the binomial floor; rho clamped to 0
};

// Fit (mu, rho) so the prior mean/variance match the observed degrees.
// When mu_override is given only rho is solved for.
inline MomentMatchResult moment_match(std::span<const int> degrees, int size,
                                      std::optional<double> mu_override = std::nullopt) {
    if (degrees.empty()) throw std::invalid_argument("moment_match: empty degree vector");
    if (size < 1) throw std::invalid_argument("moment_match: size must be >= 1");
    double sum = 0.0;
    for (int d : degrees) sum += d;
    const double n = static_cast<double>(degrees.size());
    double mu = mu_override ? *mu_override : (sum / n) / static_cast<double>(size);
    if (!(mu > 0.0)) throw std::invalid_argument("moment_match: mean degree is zero; cannot calibrate prior");
    mu = std::min(mu, 1.0 - 1e-12);

    const double mean_deg = sum / n;
    double var = 0.0;
    for (int d : degrees) var += (d - mean_deg) * (d - mean_deg);
    var /= n;

    MomentMatchResult out;
    double rho = 0.0;
    if (size > 1) {
        rho = (var / (size * mu * (1.0 - mu)) - 1.0) / static_cast<double>(size - 1);
    }
    if (rho < 0.0) {
        rho = 0.0;
        out.underdispersed = true;
    }
    rho = std::min(rho, 1.0 - 1e-9);
    out.prior = BetaBinomialPrior(mu, rho, size);
    return out;
}

// One draw of a degree: propensity from the Beta mixing distribution, then a binomial.
inline int bb_sample(const BetaBinomialPrior& prior, Rng& rng) {
    const double prop = prior.rho == 0.0 ? prior.mu : rng.beta(prior.shape_a(), prior.shape_b());
    return static_cast<int>(rng.binomial(prior.size, prop));
}

}  // namespace spillnet
