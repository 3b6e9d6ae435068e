#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace radialbodies {

/// Nodes/weights of a quadrature rule on its canonical interval.
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Thrown when a quadrature cannot reach the requested tolerance; carries the
/// error bound that was actually achieved.
class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& what, double achieved, double requested)
        : std::runtime_error(what + " (achieved " + std::to_string(achieved) +
                             ", requested " + std::to_string(requested) + ")"),
          achieved_bound(achieved),
          requested_tolerance(requested) {}
    double achieved_bound;
    double requested_tolerance;
};

namespace detail {

// Golub-Welsch: eigenvalues of the symmetric tridiagonal matrix built from
// the three-term recurrence give the nodes; the squared first components of
// the eigenvectors, scaled by the zeroth moment, give the weights.
// Implicit-shift QL, adapted from the classic tql2 routine.
inline void symmetric_tridiagonal_eigen(std::vector<double>& diag,
                                        std::vector<double>& off,
                                        std::vector<double>& first_component) {
    const std::size_t n = diag.size();
    if (n == 0) return;
    off.resize(n, 0.0);
    first_component.assign(n, 0.0);
    first_component[0] = 1.0;

    for (std::size_t l = 0; l < n; ++l) {
        int iter = 0;
        std::size_t m;
        do {
            for (m = l; m + 1 < n; ++m) {
                double dd = std::fabs(diag[m]) + std::fabs(diag[m + 1]);
                if (std::fabs(off[m]) <= 1e-300 + 2.3e-16 * dd) break;
            }
            if (m != l) {
                if (++iter == 60)
                    throw std::runtime_error("tridiagonal QL failed to converge");
                double g = (diag[l + 1] - diag[l]) / (2.0 * off[l]);
                double r = std::hypot(g, 1.0);
                g = diag[m] - diag[l] + off[l] / (g + (g >= 0 ? std::fabs(r) : -std::fabs(r)));
                double s = 1.0, c = 1.0, p = 0.0;
                for (std::size_t i = m; i-- > l;) {
                    double f = s * off[i];
                    double b = c * off[i];
                    r = std::hypot(f, g);
                    off[i + 1] = r;
                    if (r == 0.0) {
                        diag[i + 1] -= p;
                        off[m] = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = diag[i + 1] - p;
                    r = (diag[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    diag[i + 1] = g + p;
                    g = c * r - b;
                    f = first_component[i + 1];
                    first_component[i + 1] = s * first_component[i] + c * f;
                    first_component[i] = c * first_component[i] - s * f;
                }
                if (r == 0.0 && m > l + 1) continue;
                diag[l] -= p;
                off[l] = g;
                off[m] = 0.0;
            }
        } while (m != l);
    }

    // insertion sort by node, carrying the eigenvector components
    for (std::size_t i = 1; i < n; ++i) {
        double d = diag[i], f = first_component[i];
        std::size_t j = i;
        while (j > 0 && diag[j - 1] > d) {
            diag[j] = diag[j - 1];
            first_component[j] = first_component[j - 1];
            --j;
        }
        diag[j] = d;
        first_component[j] = f;
    }
}

inline QuadratureRule golub_welsch(std::vector<double> diag, std::vector<double> off,
                                   double zeroth_moment) {
    std::vector<double> fc;
    symmetric_tridiagonal_eigen(diag, off, fc);
    QuadratureRule rule;
    rule.nodes = std::move(diag);
    rule.weights.resize(rule.nodes.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.weights.size(); ++i) {
        rule.weights[i] = fc[i] * fc[i];
        sum += rule.weights[i];
    }
    // exact-arithmetic weights sum to the zeroth moment; renormalizing
    // restores that identity, which eigen roundoff violates badly for
    // strongly graded weights (Jacobi beta near -1)
    for (double& w : rule.weights) w *= zeroth_moment / sum;
    return rule;
}

}  // namespace detail

/// n-point Gauss-Legendre on [-1, 1].
inline QuadratureRule gauss_legendre(std::size_t n) {
    std::vector<double> diag(n, 0.0), off(n, 0.0);
    for (std::size_t k = 1; k < n; ++k) {
        double kk = static_cast<double>(k);
        off[k - 1] = kk / std::sqrt(4.0 * kk * kk - 1.0);
    }
    return detail::golub_welsch(std::move(diag), std::move(off), 2.0);
}

/// n-point Gauss-Jacobi on [-1, 1] for the weight (1-x)^alpha (1+x)^beta,
/// alpha, beta > -1.  Exact for polynomial integrands up to degree 2n-1.
inline QuadratureRule gauss_jacobi(std::size_t n, double alpha, double beta) {
    if (!(alpha > -1.0) || !(beta > -1.0))
        throw std::invalid_argument("gauss_jacobi: exponents must exceed -1");
    std::vector<double> diag(n, 0.0), off(n, 0.0);
    double ab = alpha + beta;
    if (n > 0) diag[0] = (beta - alpha) / (ab + 2.0);
    for (std::size_t k = 1; k < n; ++k) {
        double kk = static_cast<double>(k);
        double den = (2.0 * kk + ab) * (2.0 * kk + ab + 2.0);
        diag[k] = (beta * beta - alpha * alpha) / den;
        double b2;
        if (k == 1) {
            b2 = 4.0 * (1.0 + alpha) * (1.0 + beta) /
                 ((2.0 + ab) * (2.0 + ab) * (3.0 + ab));
        } else {
            b2 = 4.0 * kk * (kk + alpha) * (kk + beta) * (kk + ab) /
                 ((2.0 * kk + ab) * (2.0 * kk + ab) * (2.0 * kk + ab + 1.0) *
                  (2.0 * kk + ab - 1.0));
        }
        off[k - 1] = std::sqrt(b2);
    }
    double mu0 = std::exp((ab + 1.0) * std::log(2.0) + std::lgamma(alpha + 1.0) +
                          std::lgamma(beta + 1.0) - std::lgamma(ab + 2.0));
    return detail::golub_welsch(std::move(diag), std::move(off), mu0);
}

/// n-point Gauss-Hermite for the weight e^{-x^2} on the whole line.
inline QuadratureRule gauss_hermite(std::size_t n) {
    std::vector<double> diag(n, 0.0), off(n, 0.0);
    for (std::size_t k = 1; k < n; ++k)
        off[k - 1] = std::sqrt(static_cast<double>(k) / 2.0);
    return detail::golub_welsch(std::move(diag), std::move(off),
                                1.7724538509055160273);  // sqrt(pi)
}

/// Cached Gauss-Jacobi rule with alpha = 0; keyed per thread so parallel
/// gauge evaluations never contend.
inline const QuadratureRule& cached_jacobi(std::size_t n, double beta) {
    thread_local std::map<std::pair<std::size_t, double>, QuadratureRule> cache;
    auto key = std::make_pair(n, beta);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, gauss_jacobi(n, 0.0, beta)).first;
    return it->second;
}

inline const QuadratureRule& cached_legendre(std::size_t n) {
    thread_local std::map<std::size_t, QuadratureRule> cache;
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, gauss_legendre(n)).first;
    return it->second;
}

/// Integral of f(r) r^beta over [0, h] with the r^beta factor absorbed into
/// a Gauss-Jacobi rule, so f itself only needs to be smooth.
template <typename F>
double integrate_power_weight(F&& f, double h, double beta, std::size_t n) {
    if (h <= 0.0) return 0.0;
    const QuadratureRule& rule = cached_jacobi(n, beta);
    double scale = std::pow(h / 2.0, beta + 1.0);
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        // clamp away an exactly-zero node (possible when beta is close to
        // -1 and the leading node rounds onto the endpoint)
        double r = std::max(h * (1.0 + rule.nodes[i]) / 2.0, h * 1e-18);
        sum += rule.weights[i] * f(r);
    }
    return scale * sum;
}

template <typename F>
double fixed_legendre(F&& f, double a, double b, std::size_t n) {
    const QuadratureRule& rule = cached_legendre(n);
    double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
    return half * sum;
}

namespace detail {

template <typename F>
double adapt_segment(F& f, double a, double b, double whole, double tol, double rel_tol,
                     int depth, double& err_accum, long& budget) {
    double m = 0.5 * (a + b);
    double left = fixed_legendre(f, a, m, 15);
    double right = fixed_legendre(f, m, b, 15);
    double delta = left + right - whole;
    --budget;
    if (!std::isfinite(delta)) {
        // non-finite integrand; keep splitting a little to isolate it, then
        // surrender with an error that upstream tolerance checks will see
        if (depth >= 16) {
            err_accum += 1e300;
            return std::isfinite(left + right) ? left + right : 0.0;
        }
    } else if (std::fabs(delta) <= tol + rel_tol * (std::fabs(left) + std::fabs(right)) ||
               depth >= 48 || budget <= 0) {
        // a spent budget means the tolerance chases evaluator noise; stop
        // and let the recorded error speak
        err_accum += std::fabs(delta);
        return left + right;
    }
    return adapt_segment(f, a, m, left, 0.5 * tol, rel_tol, depth + 1, err_accum, budget) +
           adapt_segment(f, m, b, right, 0.5 * tol, rel_tol, depth + 1, err_accum, budget);
}

}  // namespace detail

/// Adaptive Gauss-Legendre on [a, b] with a mixed absolute/relative
/// acceptance test; the achieved error estimate is written to *err_out.
template <typename F>
double integrate_adaptive(F&& f, double a, double b, double abs_tol,
                          double* err_out = nullptr, double rel_tol = 0.0) {
    if (!(b > a)) {
        if (err_out) *err_out = 0.0;
        return 0.0;
    }
    double err = 0.0;
    double whole = fixed_legendre(f, a, b, 15);
    long budget = 20000;
    double result = detail::adapt_segment(f, a, b, whole, abs_tol, rel_tol, 0, err, budget);
    if (err_out) *err_out = err;
    return result;
}

}  // namespace radialbodies
