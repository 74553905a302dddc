#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "spillnet/math.hpp"

namespace spillnet {

// The four exposure conditions c_kl: k = own treatment, l = any treated influencer.
enum class ExposureCondition : int {
    no_exposure = 0,        // c00
    indirect_exposure = 1,  // c01
    direct_exposure = 2,    // c10
    full_exposure = 3,      // c11
};

inline constexpr std::array<const char*, 4> condition_names = {"no_exposure", "indirect_exposure",
                                                               "direct_exposure", "full_exposure"};

inline ExposureCondition make_condition(bool treated, bool indirectly_exposed) {
    return static_cast<ExposureCondition>(2 * int(treated) + int(indirectly_exposed));
}

inline int condition_index(ExposureCondition c) { return static_cast<int>(c); }

enum class FamilyKind { gaussian_linear, binomial_logit };

inline const char* family_name(FamilyKind k) {
    return k == FamilyKind::gaussian_linear ? "gaussian" : "binomial";
}

// Outcome model per exposure condition c and true in-degree d:
//   gaussian_linear:  y ~ N(alpha_c + beta_c*d, sigma2), common variance
//   binomial_logit:   y ~ Bin(trials, expit(alpha_c + beta_c*d))
struct OutcomeFamily {
    FamilyKind kind = FamilyKind::gaussian_linear;
    std::array<double, 4> alpha{};
    std::array<double, 4> beta{};
    double sigma2 = 1.0;  // gaussian only
    int trials = 1;       // binomial only

    void validate() const {
        if (kind == FamilyKind::gaussian_linear && !(sigma2 > 0.0)) {
            throw std::invalid_argument("OutcomeFamily: sigma2 must be positive");
        }
        if (kind == FamilyKind::binomial_logit && trials < 1) {
            throw std::invalid_argument("OutcomeFamily: trials must be >= 1");
        }
    }

    double linear_predictor(ExposureCondition c, int d) const {
        const int k = condition_index(c);
        return alpha[static_cast<std::size_t>(k)] + beta[static_cast<std::size_t>(k)] * d;
    }

    // E[y | c, d]
    double mean(ExposureCondition c, int d) const {
        const double eta = linear_predictor(c, d);
        return kind == FamilyKind::gaussian_linear ? eta : trials * logistic(eta);
    }

    double log_density(double y, ExposureCondition c, int d) const {
        const double eta = linear_predictor(c, d);
        if (kind == FamilyKind::gaussian_linear) {
            const double z = y - eta;
            return -0.5 * std::log(2.0 * M_PI * sigma2) - 0.5 * z * z / sigma2;
        }
        const int yi = static_cast<int>(std::lround(y));
        if (yi < 0 || yi > trials || std::abs(y - yi) > 1e-9) return neg_inf;
        // y*eta - m*log(1+e^eta) + log C(m,y)
        return log_choose(trials, yi) + yi * eta - trials * log1pexp(eta);
    }

    double density(double y, ExposureCondition c, int d) const { return std::exp(log_density(y, c, d)); }
};

}  // namespace spillnet
