#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "spillnet/math.hpp"

namespace spillnet::detail {

inline constexpr double degenerate_var_tol = 1e-12;
inline constexpr double logit_param_bound = 20.0;

// Running weighted moments for a straight-line fit of y on d.
struct WlsAccum {
    double w = 0.0, sd = 0.0, sy = 0.0, sdd = 0.0, sdy = 0.0;

    void add(double weight, double d, double y) {
        w += weight;
        sd += weight * d;
        sy += weight * y;
        sdd += weight * d * d;
        sdy += weight * d * y;
    }
};

struct LineFit {
    double alpha = 0.0;
    double beta = 0.0;
    bool degenerate = false;  // no usable degree variance; beta forced to 0
    bool empty = false;       // no weight at all
};

// Closed-form weighted least squares with the tie-break:
// beta_c = (mean(dy) - mean(d)mean(y)) / (mean(d^2) - mean(d)^2), alpha_c = mean(y) - beta_c mean(d).
inline LineFit wls_line(const WlsAccum& a) {
    LineFit fit;
    if (a.w <= 0.0) {
        fit.empty = true;
        return fit;
    }
    const double md = a.sd / a.w;
    const double my = a.sy / a.w;
    const double var_d = a.sdd / a.w - md * md;
    if (var_d < degenerate_var_tol) {
        fit.degenerate = true;
        fit.alpha = my;
        fit.beta = 0.0;
        return fit;
    }
    fit.beta = (a.sdy / a.w - md * my) / var_d;
    fit.alpha = my - fit.beta * md;
    return fit;
}

struct LogitObs {
    double weight;
    double degree;
    double successes;  // out of `trials`
};

struct LogitFit {
    double alpha = 0.0;
    double beta = 0.0;
    bool separation = false;  // parameter hit the bound; clamped
    bool degenerate = false;
    bool empty = false;
};

// Weighted logistic regression of successes/trials on degree, one condition at
// a time. Damped Newton until the gradient max-norm is below 1e-10.
inline LogitFit weighted_logit(std::span<const LogitObs> obs, int trials, double alpha0, double beta0) {
    LogitFit fit;
    double w_total = 0.0;
    WlsAccum acc;
    for (const auto& o : obs) {
        w_total += o.weight;
        acc.add(o.weight, o.degree, o.degree);
    }
    if (w_total <= 0.0) {
        fit.empty = true;
        return fit;
    }
    const double md = acc.sd / acc.w;
    const double var_d = acc.sdy / acc.w - md * md;

    const auto clamp_logit = [](double x) { return std::clamp(x, -logit_param_bound, logit_param_bound); };

    if (var_d < degenerate_var_tol) {
        // single design point: beta = 0, alpha = weighted logit of the mean rate
        double sy = 0.0;
        for (const auto& o : obs) sy += o.weight * o.successes;
        const double rate = std::clamp(sy / (w_total * trials), logistic(-logit_param_bound),
                                       logistic(logit_param_bound));
        fit.degenerate = true;
        fit.alpha = clamp_logit(logit(rate));
        fit.beta = 0.0;
        return fit;
    }

    const auto objective = [&](double a, double b) {
        double ll = 0.0;
        for (const auto& o : obs) {
            const double eta = a + b * o.degree;
            ll += o.weight * (o.successes * eta - trials * log1pexp(eta));
        }
        return ll;
    };

    double a = alpha0, b = beta0;
    double ll = objective(a, b);
    for (int iter = 0; iter < 100; ++iter) {
        double g0 = 0.0, g1 = 0.0, h00 = 0.0, h01 = 0.0, h11 = 0.0;
        for (const auto& o : obs) {
            const double eta = a + b * o.degree;
            const double pi = logistic(eta);
            const double r = o.weight * (o.successes - trials * pi);
            const double wv = o.weight * trials * pi * (1.0 - pi);
            g0 += r;
            g1 += r * o.degree;
            h00 += wv;
            h01 += wv * o.degree;
            h11 += wv * o.degree * o.degree;
        }
        if (std::max(std::abs(g0), std::abs(g1)) < 1e-10) break;
        const double det = h00 * h11 - h01 * h01;
        double step_a, step_b;
        if (det > 1e-300) {
            step_a = (h11 * g0 - h01 * g1) / det;
            step_b = (h00 * g1 - h01 * g0) / det;
        } else {
            const double scale = std::max(h00, 1e-12);
            step_a = g0 / scale;
            step_b = g1 / scale;
        }
        double t = 1.0;
        bool improved = false;
        for (int halve = 0; halve < 40; ++halve) {
            const double na = a + t * step_a;
            const double nb = b + t * step_b;
            const double nll = objective(na, nb);
            if (nll >= ll) {
                a = na;
                b = nb;
                ll = nll;
                improved = true;
                break;
            }
            t *= 0.5;
        }
        if (!improved) break;
        if (std::abs(a) > logit_param_bound || std::abs(b) > logit_param_bound) {
            fit.separation = true;
            a = clamp_logit(a);
            b = clamp_logit(b);
            break;
        }
    }
    fit.alpha = a;
    fit.beta = b;
    return fit;
}

}  // namespace spillnet::detail
