#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

#include "radialbodies/ballbody.hpp"
#include "radialbodies/geometry.hpp"
#include "radialbodies/logconcave.hpp"

namespace radialbodies {

struct McSettings {
    std::size_t samples = 1000000;
    std::uint64_t seed = 0;
};

/// A body together with its covariogram function; build once, query many
/// times (the difference-body support hint is costly to recompute).
struct RadialMeanBody {
    ConvexBody body;
    LogConcaveFn covariogram;

    explicit RadialMeanBody(ConvexBody K)
        : body(std::move(K)), covariogram(covariogram_function(body)) {}
};

/// Gauge of the radial p-th mean body through the covariogram route.
inline double radial_mean_gauge(const RadialMeanBody& K, PIndex p, const Point& x,
                                const QuadratureSpec& spec = {}) {
    return ball_gauge(K.covariogram, p, x, spec);
}

inline double radial_mean_gauge(const RadialMeanBody& K, double p, const Point& x,
                                const QuadratureSpec& spec = {}) {
    return radial_mean_gauge(K, PIndex::of(p), x, spec);
}

inline double radial_mean_gauge(const ConvexBody& K, double p, const Point& x,
                                const QuadratureSpec& spec = {}) {
    return radial_mean_gauge(RadialMeanBody(K), PIndex::of(p), x, spec);
}

namespace detail {

/// Gauge of x in the translate K - y, evaluated without materializing a new
/// body.  y is expected to lie in K.
inline double translate_gauge(const ConvexBody& K, const Point& y, const Point& x) {
    if (K.type() == BodyType::Ball) {
        Point c = subtracted(K.ball_center(), y);
        double R = K.ball_radius();
        double A = dot(c, c) - R * R;
        double B = dot(x, c);
        double C = dot(x, x);
        if (C == 0.0) return 0.0;
        if (std::fabs(A) < 1e-14 * R * R) return B > 0.0 ? C / (2.0 * B) : kInf;
        double D = B * B - A * C;
        if (A < 0.0) return (B - std::sqrt(D)) / A;
        if (D < 0.0 || B <= 0.0) return kInf;
        return (B - std::sqrt(D)) / A;
    }
    double lower = 0.0, upper = kInf;
    for (const auto& h : K.halfspaces()) {
        double b = h.offset - dot(h.normal, y);
        double num = dot(h.normal, x);
        if (b > 0.0) {
            lower = std::max(lower, num / b);
        } else if (b == 0.0) {
            if (num > 0.0) return kInf;
        } else {
            if (num >= 0.0) return kInf;
            upper = std::min(upper, num / b);
        }
    }
    return lower <= upper ? lower : kInf;
}

}  // namespace detail

/// Direct Monte Carlo evaluation of the defining average over translates
/// y ~ Uniform(K); the power mean for p != 0, the log mean for p = 0.
/// Returns the estimate and the standard error propagated through the
/// final power (or exponential).
inline McEstimate radial_mean_direct_mc(const ConvexBody& K, PIndex p, const Point& x,
                                        std::size_t samples, std::uint64_t seed) {
    if (p.branch == PIndex::Branch::Infinity)
        throw std::invalid_argument("direct MC requires finite p");
    if (samples < 1000) throw std::invalid_argument("sample count too small for an error bar");
    if (norm(x) == 0.0) return {0.0, 0.0};
    Rng rng(seed);
    const bool log_form = p.branch == PIndex::Branch::Zero;
    double sum = 0.0, sum_sq = 0.0;
    std::size_t used = 0, rejected = 0;
    for (std::size_t s = 0; s < samples; ++s) {
        Point y = sample_point(K, rng);
        double gauge = detail::translate_gauge(K, y, x);
        double term;
        if (log_form) {
            term = std::log(gauge);
            if (!std::isfinite(term)) {
                ++rejected;
                continue;
            }
        } else {
            term = std::pow(gauge, -p.value);
            if (!std::isfinite(term)) {
                ++rejected;
                continue;
            }
        }
        sum += term;
        sum_sq += term * term;
        ++used;
    }
    // the integrand is finite off a null set; a visible rejection rate
    // indicates broken geometry, not bad luck
    if (rejected > samples / 10000)
        throw std::runtime_error("direct MC: " + std::to_string(rejected) +
                                 " non-finite integrand samples");
    double mean = sum / used;
    double var = std::max(sum_sq / used - mean * mean, 0.0);
    double se_mean = std::sqrt(var / used);
    if (log_form) {
        double value = std::exp(mean);
        return {value, value * se_mean};
    }
    double value = std::pow(mean, -1.0 / p.value);
    double se = std::fabs(-1.0 / p.value) * std::pow(mean, -1.0 / p.value - 1.0) * se_mean;
    return {value, se};
}

inline McEstimate radial_mean_direct_mc(const ConvexBody& K, double p, const Point& x,
                                        std::size_t samples, std::uint64_t seed) {
    return radial_mean_direct_mc(K, PIndex::of(p), x, samples, seed);
}

/// Sampled gauge of the dilated body (1+p)^{1/p} R_p K for p near -1; its
/// radial function converges to Vol(K) times the polar projection body's.
inline StarGauge scaled_limit_samples(const RadialMeanBody& K, double p,
                                      const DirectionGrid& grid,
                                      const QuadratureSpec& spec = {}) {
    if (!(p > -1.0 && p <= -0.9))
        throw std::invalid_argument("scaled limit wants p in (-1, -0.9]");
    StarGauge raw = radial_samples(K.covariogram, PIndex::of(p), grid, spec);
    double dilation = std::pow(1.0 + p, 1.0 / p);
    for (double& r : raw.radial_values) r *= dilation;
    auto base = raw.evaluator;
    raw.evaluator = [base, dilation](const Point& x) { return base(x) / dilation; };
    return raw;
}

/// Weighted radial mean body gauge R_{p,mu}K: the weighted covariogram fed
/// through the same moment machinery; no separate code path.
inline double weighted_radial_mean_gauge(const ConvexBody& K, const Measure& mu, double p,
                                         const Point& x, std::size_t budget = 20000,
                                         const QuadratureSpec& spec = {}) {
    return ball_gauge(weighted_covariogram_function(K, mu, budget), PIndex::of(p), x, spec);
}

}  // namespace radialbodies
