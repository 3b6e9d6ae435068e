#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "radialbodies/geometry.hpp"
#include "radialbodies/logconcave.hpp"
#include "radialbodies/parallel.hpp"
#include "radialbodies/quadrature.hpp"

namespace radialbodies {

/// Moment index p in (-1, +inf] with its evaluation branch.  Indices within
/// 1e-3 of zero route to the limit branch: the (.)^{-1/p} power amplifies
/// quadrature error by 1/|p|.
struct PIndex {
    enum class Branch { Negative, Zero, Positive, Infinity };

    double value;
    Branch branch;

    static constexpr double kZeroWindow = 1e-3;

    static PIndex of(double p) {
        if (std::isinf(p) && p > 0) return {p, Branch::Infinity};
        if (!(p > -1.0)) throw std::invalid_argument("moment index must exceed -1");
        if (std::fabs(p) < kZeroWindow) return {p, Branch::Zero};
        return {p, p > 0 ? Branch::Positive : Branch::Negative};
    }
};

/// Numerical settings for the radial moment integrals.
struct QuadratureSpec {
    std::optional<double> eta;        // split radius; nullopt = automatic
    std::size_t jacobi_nodes = 48;    // singular rule on [0, eta]
    double legendre_tol = 1e-9;       // relative target, smooth part
    double truncation_tol = 1e-10;    // envelope tail budget
};

/// Positively 1-homogeneous gauge evaluator, optionally with a sampled form
/// rho(theta) = ||theta||^{-1} over a direction grid.
struct StarGauge {
    int dimension = 0;
    std::function<double(const Point&)> evaluator;
    std::optional<DirectionGrid> grid;
    std::vector<double> radial_values;

    double operator()(const Point& x) const { return evaluator(x); }
};

namespace detail {

/// One-dimensional integrand data for the moment quadratures along a ray.
struct RaySpec {
    std::function<double(double)> phi;  // psi(r) = g(r x)
    double psi0;                        // g(o)
    double tau;                         // endpoint of {psi > 0}, may be inf
    double decay_rate;                  // psi(r) <= decay_amp e^{-decay_rate r}
    double decay_amp;
    double scale_hint;                  // characteristic radius along the ray
};

/// Radius where phi first drops below `frac * psi0`, clipped to [lo, hi].
inline double drop_radius(const RaySpec& ray, double frac, double lo, double hi) {
    double r = std::min(std::max(ray.scale_hint, lo), hi);
    if (ray.phi(r) >= frac * ray.psi0) {
        while (r < hi && ray.phi(r) >= frac * ray.psi0) r *= 2.0;
        return std::min(r, hi);
    }
    while (r > lo && ray.phi(r) < frac * ray.psi0) r *= 0.5;
    return std::max(r, lo);
}

/// Truncation point T with  integral_T^inf amp e^{-beta r} r^{p-1} dr <= tol,
/// searched in log space so large p cannot overflow the bound.
inline double truncation_radius(double amp, double beta, double p, double abs_tol,
                                double start) {
    if (!(beta > 0.0) || !(amp > 0.0))
        throw QuadratureError("divergent integral: no usable envelope", kInf, abs_tol);
    double T = std::max({start, 1.0, 2.0 * std::fabs(p - 1.0) / beta});
    double log_tol = std::log(abs_tol);
    for (int i = 0; i < 200; ++i) {
        // integrand decays at least like e^{-beta r / 2} beyond T once
        // beta T >= 2(p-1); bound by 2/beta times the integrand at T
        double log_bound = std::log(amp) + (p - 1.0) * std::log(T) - beta * T +
                           std::log(2.0 / beta);
        if (log_bound <= log_tol) return T;
        T *= 1.5;
    }
    throw QuadratureError("divergent integral: envelope tail does not close", kInf, abs_tol);
}

/// Geometric ladder of breakpoints for the smooth part; guards the adaptive
/// rule against missing a sharp interior peak of r^{p-1} phi(r).
inline std::vector<double> smooth_breakpoints(double a, double b, double peak) {
    std::vector<double> pts;
    pts.push_back(a);
    double t = a;
    while (t * 2.0 < b && pts.size() < 60) {
        t *= 2.0;
        pts.push_back(t);
    }
    if (peak > a && peak < b) {
        pts.push_back(std::max(a, 0.5 * peak));
        pts.push_back(peak);
        pts.push_back(std::min(b, 2.0 * peak));
    }
    pts.push_back(b);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

template <typename F>
double integrate_segments(F&& f, const std::vector<double>& pts, double abs_tol,
                          double& err_accum, double rel_tol = 1e-12) {
    double total = 0.0;
    double per = abs_tol / std::max<std::size_t>(pts.size() - 1, 1);
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        double err = 0.0;
        total += integrate_adaptive(f, pts[i], pts[i + 1], per, &err, rel_tol);
        err_accum += err;
    }
    return total;
}

/// phi(s) s^{p-1} with the zero-support region forced to an exact zero;
/// naive evaluation produces 0 * inf = NaN once s^{p-1} overflows.
template <typename Phi>
auto weighted_integrand(Phi phi, double expo) {
    return [phi, expo](double s) {
        double v = phi(s);
        if (v == 0.0) return 0.0;
        return v * std::pow(s, expo);
    };
}

/// Log of the moment value W = (p / psi0) * integral, where the integral is
/// int_0^inf phi r^{p-1} dr            for p > 0, or
/// int_0^inf (phi - psi0) r^{p-1} dr   for p in (-1, 0).
/// The gauge along the ray is W^{-1/p} = exp(-log W / p); the logarithm is
/// returned (-inf for a vanishing moment) because W itself overflows for
/// slowly decaying profiles at large p.  Throws QuadratureError when the
/// combined error bound cannot be brought under the requested tolerance.
inline double ray_moment_log_value(const RaySpec& ray, double p, const QuadratureSpec& spec) {
    const bool positive_branch = p > 0.0;
    const double psi0 = ray.psi0;
    if (!(psi0 > 0.0)) throw std::invalid_argument("profile must be positive at the origin");

    // normalize the radial variable by the support scale; for large p on an
    // unbounded support, center the substitution on the integrand's peak so
    // r^{p-1} cannot overflow before phi's decay wins
    double rho;
    if (std::isfinite(ray.tau)) {
        rho = ray.tau;
    } else {
        rho = drop_radius(ray, 0.5, 1e-30 * ray.scale_hint, 1e30 * ray.scale_hint);
        if (positive_branch && p > 2.0) {
            auto log_integrand = [&](double t) {
                double r = std::exp(t);
                double v = ray.phi(r);
                return (v > 0.0 ? std::log(v) : -1e30) + (p - 1.0) * t;
            };
            double t_lo = std::log(rho) - 4.0, t_hi = std::log(rho);
            while (log_integrand(t_hi + 1.0) > log_integrand(t_hi) && t_hi < std::log(rho) + 60.0)
                t_hi += 1.0;
            rho = std::exp(golden_max(log_integrand, t_lo, t_hi + 1.0, 1e-3));
        }
    }
    if (!(rho > 0.0) || !std::isfinite(rho))
        throw QuadratureError("ray scale collapse", kInf, spec.legendre_tol);
    auto phi_s = [&](double s) { return ray.phi(rho * s); };
    const double s_end = std::isfinite(ray.tau) ? 1.0 : kInf;

    // truncation for unbounded support, in s units; the budget is relative
    // to the profile value at the substitution scale, which tracks the
    // actual mass when the integrand concentrates far out (large p)
    double s_trunc = s_end;
    double tail_bound = 0.0;
    if (!std::isfinite(s_end)) {
        double beta = ray.decay_rate * rho;
        double ref = std::max(ray.phi(rho), 1e-280 * psi0);
        double abs_tol = spec.truncation_tol * ref * std::min(1.0, 1.0 / std::fabs(p));
        s_trunc = truncation_radius(ray.decay_amp, beta, p, abs_tol, 2.0);
        tail_bound = abs_tol;
    }

    // split radius: stay inside the near-constant plateau of phi
    double eta = spec.eta ? std::min(*spec.eta / rho, 0.5 * s_trunc)
                          : std::min(0.5 * std::min(1.0, s_trunc),
                                     drop_radius({phi_s, psi0, s_end, ray.decay_rate * rho,
                                                  ray.decay_amp, 0.25},
                                                 0.99, 1e-6, 0.5 * std::min(1.0, s_trunc)));
    eta = std::max(eta, 1e-8);

    const std::size_t n_nodes = std::max<std::size_t>(spec.jacobi_nodes, 8);
    // cancellation floor of the subtracted bracket: the absolute error of
    // phi(s) - psi0 is ~eps psi0, and the division by s amplifies it at the
    // extreme nodes the near-singular weight insists on
    auto bracket_noise = [&](double h, std::size_t n) {
        if (positive_branch) return 1e-300;
        const QuadratureRule& rule = cached_jacobi(n, p);
        double s = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            double r = std::max(h * (1.0 + rule.nodes[i]) / 2.0, h * 1e-18);
            s += rule.weights[i] * (2.3e-16 * psi0) / r;
        }
        return std::pow(h / 2.0, p + 1.0) * s;
    };
    double head = 0.0, head_err = 0.0;
    for (int refine = 0;; ++refine) {
        double h1, h2;
        if (positive_branch) {
            h1 = integrate_power_weight(phi_s, eta, p - 1.0, n_nodes);
            h2 = integrate_power_weight(phi_s, eta, p - 1.0, std::max<std::size_t>(n_nodes / 2, 6));
        } else {
            auto bracket = [&](double s) { return (phi_s(s) - psi0) / s; };
            h1 = integrate_power_weight(bracket, eta, p, n_nodes);
            h2 = integrate_power_weight(bracket, eta, p, std::max<std::size_t>(n_nodes / 2, 6));
        }
        head = h1;
        double noise = bracket_noise(eta, n_nodes);
        head_err = std::fabs(h1 - h2) + noise;
        double mass = psi0 * std::pow(eta, positive_branch ? p : p + 1.0);
        if (std::fabs(h1 - h2) <= 0.2 * spec.legendre_tol * (std::fabs(h1) + mass) + 3.0 * noise ||
            refine >= 40)
            break;
        eta *= 0.5;  // a kink of phi inside [0, eta]; shrink past it
    }

    // smooth part on [eta, s_trunc]; the absolute tolerance is scaled from
    // integrand samples at the ladder points, so peak-concentrated
    // integrands (large p) get a scale matching their actual mass
    double peak = positive_branch && ray.decay_rate > 0.0
                      ? (p - 1.0) / (ray.decay_rate * rho)
                      : 0.0;
    std::vector<double> pts = smooth_breakpoints(eta, s_trunc, peak);
    auto shifted = [&](double s) { return phi_s(s) - psi0; };
    auto pos_integrand = weighted_integrand(phi_s, p - 1.0);
    auto neg_integrand = weighted_integrand(shifted, p - 1.0);
    double mag = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        double m = 0.5 * (pts[i] + pts[i + 1]);
        for (double s : {pts[i], m}) {
            double v = positive_branch ? pos_integrand(s) : neg_integrand(s);
            if (std::isfinite(v)) mag = std::max(mag, std::fabs(v));
        }
    }
    double abs_tol_smooth =
        spec.legendre_tol * std::max(mag * (s_trunc - eta), 1e-280);
    double smooth_err = 0.0;
    double smooth;
    const double rel = 0.02 * spec.legendre_tol;
    if (positive_branch) {
        smooth = integrate_segments(pos_integrand, pts, abs_tol_smooth, smooth_err, rel);
    } else {
        smooth = integrate_segments(neg_integrand, pts, abs_tol_smooth, smooth_err, rel);
    }

    // exact constant tail for the negative branch
    double tail = 0.0;
    if (!positive_branch) tail = psi0 * std::pow(s_trunc, p) / p;

    double integral_s = head + smooth + tail;
    double err = head_err + smooth_err + tail_bound;
    double value_s = p / psi0 * integral_s;  // >= 0 on both branches
    double err_rel = err / std::max(std::fabs(integral_s), 1e-300);
    if (value_s < 0.0 && err_rel > 0.5) value_s = 0.0;  // pure roundoff residue
    if (value_s < 0.0)
        throw QuadratureError("moment integral has the wrong sign", std::fabs(value_s),
                              spec.legendre_tol);
    if (value_s > 0.0 && err_rel > 1e4 * spec.legendre_tol && err_rel > 1e-5)
        throw QuadratureError("quadrature tolerance not met after max refinement", err_rel,
                              spec.legendre_tol);

    // undo the substitution r = rho s:  log W = log value_s + p log rho
    if (value_s == 0.0) return -kInf;
    return std::log(value_s) + p * std::log(rho);
}

inline double gauge_from_log_moment(double log_W, double p) {
    if (log_W == -kInf) return p > 0.0 ? kInf : 0.0;
    if (log_W == kInf) return p > 0.0 ? 0.0 : kInf;
    return std::exp(-log_W / p);
}

inline RaySpec make_ray_spec(const LogConcaveFn& g, const Point& x) {
    RaySpec ray;
    auto eval = g.eval;
    Point xv = x;
    ray.phi = [eval, xv](double r) { return eval(scaled(xv, r)); };
    ray.psi0 = g.origin_value;
    double len = norm(x);
    if (g.full_support) {
        ray.tau = kInf;
    } else if (g.support_exact && g.support_hint) {
        double m = minkowski_functional(*g.support_hint, x);
        ray.tau = m == 0.0 ? kInf : (std::isinf(m) ? 0.0 : 1.0 / m);
    } else {
        auto positive = [&g, &xv](double r) { return g.positive_at(scaled(xv, r)); };
        ray.tau = ray_support_end_bisect(positive, std::max(g.scale / std::max(len, 1e-300), 1e-30));
    }
    Envelope env = g.envelope.value_or(Envelope{g.origin_value * M_E, 1.0 / g.scale});
    ray.decay_rate = env.c * len;
    ray.decay_amp = env.a;
    ray.scale_hint = std::isfinite(g.scale) ? g.scale / std::max(len, 1e-300) : 1.0;
    return ray;
}

inline double ray_gauge_finite(const RaySpec& ray, double p, const QuadratureSpec& spec) {
    if (ray.tau == 0.0) return kInf;  // the profile vanishes along the open ray
    return gauge_from_log_moment(ray_moment_log_value(ray, p, spec), p);
}

/// p = 0 as the Richardson limit of the finite family at p = +-h, +-h/2:
/// the symmetric average kills the odd terms of log gauge(p), the second
/// level removes the h^2 term as well.
inline double ray_gauge_zero(const RaySpec& ray, const QuadratureSpec& spec) {
    if (ray.tau == 0.0) return kInf;
    const double h = PIndex::kZeroWindow;
    auto level = [&](double step) -> double {
        double gp = ray_gauge_finite(ray, step, spec);
        double gm = ray_gauge_finite(ray, -step, spec);
        if (std::isinf(gp) || std::isinf(gm)) return kInf;
        return 0.5 * (std::log(gp) + std::log(gm));
    };
    double coarse = level(h), fine = level(0.5 * h);
    if (std::isinf(coarse) || std::isinf(fine)) return kInf;
    return std::exp((4.0 * fine - coarse) / 3.0);
}

/// Direct log-weight route for p = 0 (cross-check of the Richardson path):
/// exp( (1/psi0) [ int_0^R (phi - psi0)/r dr + psi0 log R + int_R^T phi/r dr ] )^{-1}.
inline double ray_gauge_zero_logweight(const RaySpec& ray, const QuadratureSpec& spec) {
    if (ray.tau == 0.0) return kInf;
    double rho = std::isfinite(ray.tau) ? ray.tau
                                        : drop_radius(ray, 0.5, 1e-30 * ray.scale_hint,
                                                      1e30 * ray.scale_hint);
    double T = rho;
    if (!std::isfinite(ray.tau)) {
        double abs_tol = spec.truncation_tol * ray.psi0;
        T = rho * truncation_radius(ray.decay_amp, ray.decay_rate * rho, 1e-6, abs_tol, 2.0);
    }
    double err = 0.0;
    double inner = integrate_segments(
        [&](double r) { return (ray.phi(r) - ray.psi0) / r; },
        smooth_breakpoints(1e-9 * rho, rho, 0.0), spec.legendre_tol * ray.psi0, err);
    double outer = 0.0;
    if (T > rho)
        outer = integrate_segments([&](double r) { return ray.phi(r) / r; },
                                   smooth_breakpoints(rho, T, 0.0),
                                   spec.legendre_tol * ray.psi0, err);
    double L = (inner + outer) / ray.psi0 + std::log(rho);
    return std::exp(-L);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Public gauges
// ---------------------------------------------------------------------------

/// The four-branch gauge of the p-th Ball body of g.  Returns +infinity for
/// directions along which g vanishes identically (possible only when the
/// origin sits on the boundary of the support).
inline double ball_gauge(const LogConcaveFn& g, PIndex p, const Point& x,
                         const QuadratureSpec& spec = {}) {
    if (norm(x) == 0.0) return 0.0;
    if (p.branch == PIndex::Branch::Infinity) {
        if (g.full_support) return 0.0;
        if (g.support_exact && g.support_hint) return minkowski_functional(*g.support_hint, x);
        detail::RaySpec ray = detail::make_ray_spec(g, x);
        return ray.tau == 0.0 ? kInf : 1.0 / ray.tau;
    }
    detail::RaySpec ray = detail::make_ray_spec(g, x);
    if (p.branch == PIndex::Branch::Zero) return detail::ray_gauge_zero(ray, spec);
    return detail::ray_gauge_finite(ray, p.value, spec);
}

inline double ball_gauge(const LogConcaveFn& g, double p, const Point& x,
                         const QuadratureSpec& spec = {}) {
    return ball_gauge(g, PIndex::of(p), x, spec);
}

/// Independent p = 0 route through the log-r weight; used as a cross-check
/// of the Richardson extrapolation branch.
inline double ball_gauge_zero_logweight(const LogConcaveFn& g, const Point& x,
                                        const QuadratureSpec& spec = {}) {
    if (norm(x) == 0.0) return 0.0;
    detail::RaySpec ray = detail::make_ray_spec(g, x);
    if (ray.tau == 0.0) return kInf;
    return detail::ray_gauge_zero_logweight(ray, spec);
}

/// Unified derivative form ((1/g(o)) int (-d/dr g(rx)) r^p dr)^{-1/p};
/// requires a continuous profile along the ray (finite differences cannot
/// see a jump), so indicators are outside its contract.
inline double ball_gauge_unified(const LogConcaveFn& g, PIndex p, const Point& x,
                                 const QuadratureSpec& spec = {}) {
    if (p.branch == PIndex::Branch::Zero || p.branch == PIndex::Branch::Infinity)
        throw std::invalid_argument("unified form requires finite nonzero p");
    if (norm(x) == 0.0) return 0.0;
    detail::RaySpec ray = detail::make_ray_spec(g, x);
    if (ray.tau == 0.0) return kInf;

    double rho = std::isfinite(ray.tau)
                     ? ray.tau
                     : detail::drop_radius(ray, 0.5, 1e-30 * ray.scale_hint,
                                           1e30 * ray.scale_hint);
    const double h = 1e-5 * rho;
    auto phi = ray.phi;
    double tau = ray.tau;
    // five-point derivative, one-sided stencils near 0 and the endpoint
    auto minus_dphi = [phi, h, tau](double r) {
        auto f = [&](double t) { return t < 0.0 ? phi(0.0) : phi(t); };
        if (r < 2.0 * h) {
            // forward: f'(r) ~ (-25 f0 +48 f1 -36 f2 +16 f3 -3 f4)/(12h)
            double d = (-25.0 * f(r) + 48.0 * f(r + h) - 36.0 * f(r + 2 * h) +
                        16.0 * f(r + 3 * h) - 3.0 * f(r + 4 * h)) /
                       (12.0 * h);
            return -d;
        }
        if (std::isfinite(tau) && r > tau - 2.0 * h) {
            double d = (25.0 * f(r) - 48.0 * f(r - h) + 36.0 * f(r - 2 * h) -
                        16.0 * f(r - 3 * h) + 3.0 * f(r - 4 * h)) /
                       (12.0 * h);
            return -d;
        }
        double d = (8.0 * (f(r + h) - f(r - h)) - (f(r + 2 * h) - f(r - 2 * h))) / (12.0 * h);
        return -d;
    };

    double p_val = p.value;
    auto dphi_s = [&](double s) { return minus_dphi(rho * s); };
    double s_end = std::isfinite(tau) ? tau / rho : kInf;
    double s_trunc = s_end;
    if (!std::isfinite(s_end)) {
        double beta = ray.decay_rate * rho;
        s_trunc = detail::truncation_radius(ray.decay_amp * (beta + 1.0), beta, p_val + 1.0,
                                            spec.truncation_tol * ray.psi0, 2.0);
    }
    double eta = std::min(0.25, 0.5 * s_trunc);
    double head = integrate_power_weight(dphi_s, eta, p_val, spec.jacobi_nodes);
    double err = 0.0;
    double smooth = detail::integrate_segments(
        [&](double s) { return dphi_s(s) * std::pow(s, p_val); },
        detail::smooth_breakpoints(eta, s_trunc, p_val / std::max(ray.decay_rate * rho, 1e-12)),
        spec.legendre_tol * ray.psi0, err);
    // the substitution contributes rho^{p+1}: dr = rho ds and r^p = rho^p s^p
    double X = (head + smooth) / ray.psi0;
    if (!(X > 0.0)) return detail::gauge_from_log_moment(-kInf, p_val);
    return detail::gauge_from_log_moment(std::log(X) + (p_val + 1.0) * std::log(rho), p_val);
}

inline double ball_gauge_unified(const LogConcaveFn& g, double p, const Point& x,
                                 const QuadratureSpec& spec = {}) {
    return ball_gauge_unified(g, PIndex::of(p), x, spec);
}

/// I_p of a one-dimensional profile: the normalized p-th moment whose
/// reciprocal is the gauge along the profile's ray.
inline double i_p(const RayProfile& prof, double p, const QuadratureSpec& spec = {}) {
    if (!(p > -1.0) || p == 0.0)
        throw std::invalid_argument("i_p requires p in (-1,0) or (0,inf)");
    detail::RaySpec ray;
    ray.phi = prof.psi;
    ray.psi0 = prof.psi0;
    ray.tau = prof.support_end;
    if (std::isfinite(prof.support_end)) {
        ray.decay_rate = 1.0 / prof.support_end;
        ray.decay_amp = prof.psi0 * M_E;
        ray.scale_hint = prof.support_end;
    } else {
        // estimate the exponential rate from log-slopes at doubling radii
        double r = 1.0;
        while (prof.psi(r) >= 0.5 * prof.psi0 && r < 1e12) r *= 2.0;
        double c = kInf;
        for (double t : {r, 2.0 * r, 4.0 * r}) {
            double v = prof.psi(t);
            if (v > 0.0) c = std::min(c, (std::log(prof.psi0) - std::log(v)) / t);
        }
        if (!std::isfinite(c) || c <= 0.0)
            throw QuadratureError("divergent integral: profile decay not detectable", kInf,
                                  spec.truncation_tol);
        ray.decay_rate = c;
        ray.decay_amp = prof.psi0 * std::exp(2.0);
        ray.scale_hint = r;
    }
    if (ray.tau == 0.0) return 0.0;
    double log_W = detail::ray_moment_log_value(ray, p, spec);
    // I_p = W^{1/p}
    return log_W == -kInf ? 0.0 : std::exp(log_W / p);
}

/// Batch gauge sampling over a direction grid: rho(theta) = gauge^{-1}.
/// Parallel over directions, deterministic output order; per-direction
/// failures are reported with their grid index.
inline StarGauge radial_samples(const LogConcaveFn& g, PIndex p, const DirectionGrid& grid,
                                const QuadratureSpec& spec = {}) {
    StarGauge out;
    out.dimension = g.dimension;
    out.grid = grid;
    out.radial_values.assign(grid.directions.size(), 0.0);
    std::vector<std::string> failures(grid.directions.size());
    parallel_for(grid.directions.size(), [&](std::size_t i) {
        try {
            double gauge = ball_gauge(g, p, grid.directions[i], spec);
            out.radial_values[i] = gauge == 0.0 ? kInf : 1.0 / gauge;
        } catch (const std::exception& e) {
            failures[i] = e.what();
        }
    });
    for (std::size_t i = 0; i < failures.size(); ++i)
        if (!failures[i].empty())
            throw std::runtime_error("direction " + std::to_string(i) + ": " + failures[i]);
    LogConcaveFn captured = g;
    QuadratureSpec spec_copy = spec;
    out.evaluator = [captured, p, spec_copy](const Point& x) {
        return ball_gauge(captured, p, x, spec_copy);
    };
    return out;
}

inline StarGauge radial_samples(const LogConcaveFn& g, double p, const DirectionGrid& grid,
                                const QuadratureSpec& spec = {}) {
    return radial_samples(g, PIndex::of(p), grid, spec);
}

}  // namespace radialbodies
