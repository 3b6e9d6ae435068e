#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "radialbodies/geometry.hpp"
#include "radialbodies/quadrature.hpp"
#include "radialbodies/rng.hpp"

namespace radialbodies {

/// Exponential majorant g(x) <= a e^{-c |x|}.
struct Envelope {
    double a;
    double c;
};

/// Evaluatable log-concave function with maximum at the origin.  The
/// metadata (support hint, envelope, scale) drives truncation and splitting
/// choices in the gauge quadratures; none of it changes the values.
struct LogConcaveFn {
    int dimension = 0;
    std::function<double(const Point&)> eval;
    double origin_value = 1.0;
    bool origin_interior = true;
    bool full_support = false;
    std::optional<ConvexBody> support_hint;
    bool support_exact = false;  // hint gauge gives the exact ray endpoint
    std::optional<Envelope> envelope;
    double scale = 1.0;  // characteristic decay length
    // exact sign of g when the evaluator itself rounds slivers to zero
    std::function<bool(const Point&)> positivity;

    double operator()(const Point& x) const { return eval(x); }
    bool positive_at(const Point& x) const {
        return positivity ? positivity(x) : eval(x) > 0.0;
    }
};

/// Borel measure with log-concave density; the weight of the weighted
/// covariogram.
struct Measure {
    LogConcaveFn density;
};

/// One-dimensional restriction psi(r) = g(r theta), r >= 0, together with
/// the endpoint of its positivity interval.
struct RayProfile {
    Point direction;
    std::function<double(double)> psi;
    double psi0 = 1.0;         // psi(0) = g(o)
    double support_end = 0.0;  // tau in [0, +inf]
};

// ---------------------------------------------------------------------------
// Families
// ---------------------------------------------------------------------------

namespace detail {

inline bool spd_cholesky(std::vector<std::vector<double>> A) {
    const std::size_t n = A.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double s = A[i][j];
            for (std::size_t k = 0; k < j; ++k) s -= A[i][k] * A[j][k];
            if (i == j) {
                if (s <= 0.0) return false;
                A[i][i] = std::sqrt(s);
            } else {
                A[i][j] = s / A[j][j];
            }
        }
    }
    return true;
}

inline bool psd_check(const std::vector<std::vector<double>>& A) {
    // PSD iff A + eps I is SPD for eps -> 0; a tiny ridge handles the
    // semidefinite boundary cases like rank-one forms
    double scale = 0.0;
    for (const auto& row : A)
        for (double v : row) scale = std::max(scale, std::fabs(v));
    auto ridged = A;
    for (std::size_t i = 0; i < A.size(); ++i) ridged[i][i] += 1e-12 * std::max(scale, 1.0);
    return spd_cholesky(ridged);
}

}  // namespace detail

/// Centered Gaussian e^{-<x, Sigma^{-1} x>/2} given the covariance Sigma
/// (value 1 at the origin; normalization is irrelevant for the gauges).
inline LogConcaveFn make_gaussian(std::vector<std::vector<double>> covariance) {
    const int n = static_cast<int>(covariance.size());
    // invert by Gauss-Jordan; n is small
    std::vector<std::vector<double>> inv(n, std::vector<double>(n, 0.0));
    {
        auto m = covariance;
        for (int i = 0; i < n; ++i) inv[i][i] = 1.0;
        for (int col = 0; col < n; ++col) {
            int piv = col;
            for (int r = col + 1; r < n; ++r)
                if (std::fabs(m[r][col]) > std::fabs(m[piv][col])) piv = r;
            if (std::fabs(m[piv][col]) < 1e-14)
                throw std::invalid_argument("gaussian covariance is singular");
            std::swap(m[piv], m[col]);
            std::swap(inv[piv], inv[col]);
            double d = m[col][col];
            for (int c = 0; c < n; ++c) {
                m[col][c] /= d;
                inv[col][c] /= d;
            }
            for (int r = 0; r < n; ++r) {
                if (r == col) continue;
                double f = m[r][col];
                for (int c = 0; c < n; ++c) {
                    m[r][c] -= f * m[col][c];
                    inv[r][c] -= f * inv[col][c];
                }
            }
        }
    }
    if (!detail::psd_check(covariance))
        throw std::invalid_argument("gaussian covariance must be positive definite");
    double max_var = 0.0, trace = 0.0;
    for (int i = 0; i < n; ++i) {
        max_var = std::max(max_var, covariance[i][i]);
        trace += covariance[i][i];
    }

    LogConcaveFn g;
    g.dimension = n;
    g.eval = [inv, n](const Point& x) {
        double q = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) q += x[i] * inv[i][j] * x[j];
        return std::exp(-0.5 * q);
    };
    g.origin_value = 1.0;
    g.origin_interior = true;
    g.full_support = true;
    // the largest eigenvalue is bounded by the trace; with v = trace the
    // bound e^{-r^2/2v} <= e^{1/2} e^{-r/sqrt(v)} holds in every direction
    g.scale = std::sqrt(trace);
    g.envelope = Envelope{std::exp(0.5), 1.0 / g.scale};
    return g;
}

inline LogConcaveFn make_gaussian_isotropic(int n, double variance) {
    std::vector<std::vector<double>> cov(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i) cov[i][i] = variance;
    return make_gaussian(std::move(cov));
}

/// e^{-c |x|}.
inline LogConcaveFn make_exp_norm(int n, double c) {
    if (!(c > 0.0)) throw std::invalid_argument("exp-norm decay rate must be positive");
    LogConcaveFn g;
    g.dimension = n;
    g.eval = [c](const Point& x) { return std::exp(-c * norm(x)); };
    g.origin_value = 1.0;
    g.origin_interior = true;
    g.full_support = true;
    g.scale = 1.0 / c;
    g.envelope = Envelope{1.0, c};
    return g;
}

/// Indicator of a convex body containing the origin.  origin_interior is
/// detected, not required: indicators with the origin on the boundary are
/// legal and exercise the +infinity gauge branch.
inline LogConcaveFn make_indicator(const ConvexBody& body) {
    Point o(body.dimension(), 0.0);
    double tol = 1e-12 * body.diameter();
    if (!body.contains(o, tol))
        throw std::invalid_argument("indicator body must contain the origin");
    bool interior = true;
    switch (body.type()) {
        case BodyType::Ball:
            interior = norm(body.ball_center()) < body.ball_radius() - tol;
            break;
        case BodyType::Box:
            for (int i = 0; i < body.dimension(); ++i)
                if (!(body.box_lo()[i] < -tol && body.box_hi()[i] > tol)) interior = false;
            break;
        default:
            for (const auto& h : body.halfspaces())
                if (h.offset < tol) interior = false;
            break;
    }
    LogConcaveFn g;
    g.dimension = body.dimension();
    ConvexBody captured = body;
    g.eval = [captured](const Point& x) { return captured.contains(x) ? 1.0 : 0.0; };
    g.origin_value = 1.0;
    g.origin_interior = interior;
    g.full_support = false;
    g.support_hint = body;
    g.support_exact = true;
    g.scale = body.diameter();
    g.envelope = Envelope{std::exp(1.0), 1.0 / body.diameter()};
    return g;
}

/// e^{-Q(x)} for a convex quadratic form Q(x) = <x, A x>; cross terms
/// allowed.  A must be positive definite: semidefinite forms are convex but
/// not integrable.
inline LogConcaveFn make_quadratic_exponential(std::vector<std::vector<double>> A);

/// Fit (a, c) with g <= a e^{-c|x|}; declared ahead of the families that
/// need a verified envelope at construction.
inline Envelope fit_envelope(const LogConcaveFn& g, std::size_t verify_samples,
                             std::uint64_t seed);

inline LogConcaveFn make_quadratic_exponential(std::vector<std::vector<double>> A) {
    const int n = static_cast<int>(A.size());
    // symmetrize
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < i; ++j) {
            double s = 0.5 * (A[i][j] + A[j][i]);
            A[i][j] = A[j][i] = s;
        }
    if (!detail::psd_check(A))
        throw std::invalid_argument("non-convex quadratic");
    if (!detail::spd_cholesky(A))
        throw std::invalid_argument("quadratic form must be positive definite");
    double amin = kInf;
    for (int i = 0; i < n; ++i) amin = std::min(amin, A[i][i]);
    LogConcaveFn g;
    g.dimension = n;
    g.eval = [A, n](const Point& x) {
        double q = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) q += x[i] * A[i][j] * x[j];
        return std::exp(-q);
    };
    g.origin_value = 1.0;
    g.origin_interior = true;
    g.full_support = true;
    // the slowest axis is at least as slow as the smallest diagonal; the
    // fitted envelope is verified on samples, so anisotropy cannot sneak a
    // too-optimistic decay rate past it
    g.scale = 1.0 / std::sqrt(amin);
    g.envelope = fit_envelope(g, 1000, 4242);
    return g;
}

/// Pointwise product; log-concavity is closed under it.
inline LogConcaveFn make_product(std::vector<LogConcaveFn> factors) {
    if (factors.empty()) throw std::invalid_argument("product needs at least one factor");
    const int n = factors.front().dimension;
    for (const auto& f : factors)
        if (f.dimension != n) throw std::invalid_argument("product dimension mismatch");
    LogConcaveFn g;
    g.dimension = n;
    g.origin_value = 1.0;
    g.origin_interior = true;
    g.full_support = true;
    g.scale = kInf;
    int bounded = 0;
    for (const auto& f : factors) {
        g.origin_value *= f.origin_value;
        g.origin_interior = g.origin_interior && f.origin_interior;
        g.full_support = g.full_support && f.full_support;
        g.scale = std::min(g.scale, f.scale);
        if (!f.full_support) {
            ++bounded;
            g.support_hint = f.support_hint;
            g.support_exact = f.support_exact;
        }
    }
    if (bounded > 1) {
        g.support_hint.reset();
        g.support_exact = false;
    }
    auto fs = std::make_shared<std::vector<LogConcaveFn>>(std::move(factors));
    g.eval = [fs](const Point& x) {
        double v = 1.0;
        for (const auto& f : *fs) {
            v *= f.eval(x);
            if (v == 0.0) return 0.0;
        }
        return v;
    };
    return g;
}

/// Restriction g * chi_B.
inline LogConcaveFn make_restriction(LogConcaveFn g, const ConvexBody& body) {
    LogConcaveFn r = g;
    ConvexBody captured = body;
    auto inner = g.eval;
    r.eval = [inner, captured](const Point& x) {
        return captured.contains(x) ? inner(x) : 0.0;
    };
    LogConcaveFn ind = make_indicator(body);
    r.origin_interior = g.origin_interior && ind.origin_interior;
    r.full_support = false;
    r.support_hint = body;
    r.support_exact = g.full_support;
    r.scale = std::min(g.scale, body.diameter());
    return r;
}

// ---------------------------------------------------------------------------
// Ray profiles
// ---------------------------------------------------------------------------

namespace detail {

/// Endpoint of {r > 0 : g(r theta) > 0} by bisection; the positivity set of
/// a log-concave profile with g(o) > 0 is an interval from 0.
inline double ray_support_end_bisect(const std::function<bool(double)>& positive, double scale) {
    double probe = -1.0;
    for (int k = 0; k <= 80; ++k) {
        double r = scale * std::pow(2.0, -k);
        if (positive(r)) {
            probe = r;
            break;
        }
    }
    if (probe < 0.0) return 0.0;  // zero along the whole open ray
    double lo = probe, hi = probe;
    for (int k = 0; k < 60 && positive(hi); ++k) hi *= 2.0;
    if (positive(hi)) return kInf;
    for (int i = 0; i < 80; ++i) {
        double mid = 0.5 * (lo + hi);
        if (positive(mid))
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace detail

inline RayProfile ray_profile(const LogConcaveFn& g, const Point& theta) {
    if (std::fabs(norm(theta) - 1.0) > 1e-9)
        throw std::invalid_argument("ray direction must be unit");
    RayProfile prof;
    prof.direction = theta;
    auto eval = g.eval;
    Point dir = theta;
    prof.psi = [eval, dir](double r) { return eval(scaled(dir, r)); };
    prof.psi0 = g.origin_value;
    if (g.full_support) {
        prof.support_end = kInf;
    } else {
        auto positive = [&g, &dir](double r) { return g.positive_at(scaled(dir, r)); };
        prof.support_end = detail::ray_support_end_bisect(positive, std::max(g.scale, 1e-30));
    }
    return prof;
}

// ---------------------------------------------------------------------------
// Quadrature over bodies (weighted / L1 / L2 covariogram machinery)
// ---------------------------------------------------------------------------

namespace detail {

// degree-5 rule on the reference triangle, 7 points
struct TriRulePoint {
    double l1, l2, w;
};
inline const std::array<TriRulePoint, 7>& tri_rule() {
    static const std::array<TriRulePoint, 7> rule = {{
        {1.0 / 3.0, 1.0 / 3.0, 0.225},
        {0.0597158717897698, 0.4701420641051151, 0.1323941527885062},
        {0.4701420641051151, 0.0597158717897698, 0.1323941527885062},
        {0.4701420641051151, 0.4701420641051151, 0.1323941527885062},
        {0.7974269853530873, 0.1012865073234563, 0.1259391805448271},
        {0.1012865073234563, 0.7974269853530873, 0.1259391805448271},
        {0.1012865073234563, 0.1012865073234563, 0.1259391805448271},
    }};
    return rule;
}

template <typename F>
double integrate_triangle(const V2& a, const V2& b, const V2& c, F&& f, int levels) {
    if (levels > 0) {
        V2 ab = {0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])};
        V2 bc = {0.5 * (b[0] + c[0]), 0.5 * (b[1] + c[1])};
        V2 ca = {0.5 * (c[0] + a[0]), 0.5 * (c[1] + a[1])};
        return integrate_triangle(a, ab, ca, f, levels - 1) +
               integrate_triangle(ab, b, bc, f, levels - 1) +
               integrate_triangle(ca, bc, c, f, levels - 1) +
               integrate_triangle(ab, bc, ca, f, levels - 1);
    }
    double area = 0.5 * std::fabs((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]));
    double s = 0.0;
    for (const auto& p : tri_rule()) {
        double l3 = 1.0 - p.l1 - p.l2;
        Point q = {p.l1 * a[0] + p.l2 * b[0] + l3 * c[0], p.l1 * a[1] + p.l2 * b[1] + l3 * c[1]};
        s += p.w * f(q);
    }
    return area * s;
}

// degree-2 rule on the reference tetrahedron, 4 points
template <typename F>
double integrate_tet(const V3& a, const V3& b, const V3& c, const V3& d, F&& f, int levels) {
    if (levels > 0) {
        auto mid = [](const V3& p, const V3& q) {
            return V3{0.5 * (p[0] + q[0]), 0.5 * (p[1] + q[1]), 0.5 * (p[2] + q[2])};
        };
        V3 ab = mid(a, b), ac = mid(a, c), ad = mid(a, d);
        V3 bc = mid(b, c), bd = mid(b, d), cd = mid(c, d);
        // 8-way corner + octahedron split
        return integrate_tet(a, ab, ac, ad, f, levels - 1) +
               integrate_tet(ab, b, bc, bd, f, levels - 1) +
               integrate_tet(ac, bc, c, cd, f, levels - 1) +
               integrate_tet(ad, bd, cd, d, f, levels - 1) +
               integrate_tet(ab, ac, ad, bd, f, levels - 1) +
               integrate_tet(ab, ac, bc, bd, f, levels - 1) +
               integrate_tet(ac, ad, bd, cd, f, levels - 1) +
               integrate_tet(ac, bc, bd, cd, f, levels - 1);
    }
    double vol = std::fabs(dot3(cross3(sub3(b, a), sub3(c, a)), sub3(d, a))) / 6.0;
    const double alpha = 0.5854101966249685, beta = 0.1381966011250105;
    double s = 0.0;
    const V3* verts[4] = {&a, &b, &c, &d};
    for (int i = 0; i < 4; ++i) {
        Point q = {0.0, 0.0, 0.0};
        for (int j = 0; j < 4; ++j) {
            double w = (i == j) ? alpha : beta;
            for (int k = 0; k < 3; ++k) q[k] += w * (*verts[j])[k];
        }
        s += 0.25 * f(q);
    }
    return vol * s;
}

/// Integrate f over a convex polygon (fan from centroid, refined rule).
template <typename F>
double integrate_polygon(const Polygon& poly, F&& f, int levels) {
    if (poly.size() < 3) return 0.0;
    V2 cen = {0.0, 0.0};
    for (const auto& p : poly) {
        cen[0] += p[0] / poly.size();
        cen[1] += p[1] / poly.size();
    }
    double s = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i)
        s += integrate_triangle(cen, poly[i], poly[(i + 1) % poly.size()], f, levels);
    return s;
}

template <typename F>
double integrate_poly3(const Poly3& p, F&& f, int levels) {
    if (p.empty()) return 0.0;
    // fan point from the vertices the faces actually reference: the vertex
    // array may still hold clipped-away points, whose average can fall
    // outside the region and break the fan decomposition
    V3 cen = {0.0, 0.0, 0.0};
    std::size_t used = 0;
    for (int idx : p.face_data) {
        for (int k = 0; k < 3; ++k) cen[k] += p.v[idx][k];
        ++used;
    }
    for (int k = 0; k < 3; ++k) cen[k] /= static_cast<double>(used);
    double s = 0.0;
    for (std::size_t fi = 0; fi < p.face_count(); ++fi) {
        int begin = p.face_off[fi], end = p.face_off[fi + 1];
        for (int i = begin + 1; i + 1 < end; ++i)
            s += integrate_tet(cen, p.v[p.face_data[begin]], p.v[p.face_data[i]],
                               p.v[p.face_data[i + 1]], f, levels);
    }
    return s;
}

inline std::size_t poly3_triangle_count(const Poly3& p) {
    std::size_t tris = 0;
    for (std::size_t fi = 0; fi < p.face_count(); ++fi)
        tris += static_cast<std::size_t>(
            std::max(p.face_off[fi + 1] - p.face_off[fi] - 2, 0));
    return tris;
}

inline int subdivision_levels(std::size_t budget, std::size_t base_cells, int per_cell,
                              int dim_power) {
    int levels = 0;
    double cost = static_cast<double>(base_cells) * per_cell;
    while (levels < 8 && cost * std::pow(static_cast<double>(1 << dim_power), levels + 1) <=
                             static_cast<double>(budget))
        ++levels;
    return levels;
}

/// Integrate f over a bounded body with roughly `budget` evaluations.
template <typename F>
double integrate_over_body(const ConvexBody& K, F&& f, std::size_t budget) {
    const int n = K.dimension();
    if (n == 1) {
        double lo = K.bounding_box().first[0], hi = K.bounding_box().second[0];
        std::size_t cells = std::max<std::size_t>(budget / 4, 1);
        double h = (hi - lo) / cells, s = 0.0;
        for (std::size_t i = 0; i < cells; ++i)
            s += fixed_legendre([&](double t) { return f(Point{t}); }, lo + i * h,
                                lo + (i + 1) * h, 4);
        return s;
    }
    if (n == 2) {
        Polygon poly;
        if (K.type() == BodyType::Ball) {
            for (int k = 0; k < 64; ++k) {
                double a = 2.0 * M_PI * k / 64;
                poly.push_back({K.ball_center()[0] + K.ball_radius() * std::cos(a),
                                K.ball_center()[1] + K.ball_radius() * std::sin(a)});
            }
        } else {
            for (const auto& v : K.vertices()) poly.push_back({v[0], v[1]});
        }
        int levels = subdivision_levels(budget, poly.size(), 7, 2);
        return integrate_polygon(poly, f, levels);
    }
    if (n == 3) {
        if (K.type() == BodyType::Ball)
            throw std::invalid_argument("3D ball integration not supported on the grid path");
        Poly3 p = poly3_from_body_vertices(K.vertices());
        int levels = subdivision_levels(budget, poly3_triangle_count(p), 4, 3);
        return integrate_poly3(p, f, levels);
    }
    throw std::invalid_argument("grid integration requires dimension <= 3");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Generalized covariograms
// ---------------------------------------------------------------------------

/// Classical covariogram g_K as a log-concave function; exact values, exact
/// support (the difference body).
inline LogConcaveFn covariogram_function(const ConvexBody& K) {
    LogConcaveFn g;
    g.dimension = K.dimension();
    ConvexBody body = K;
    g.eval = [body](const Point& x) { return covariogram(body, x); };
    g.positivity = [body](const Point& x) { return covariogram_positive(body, x); };
    g.origin_value = volume(K);
    g.origin_interior = true;
    g.full_support = false;
    g.support_hint = difference_body(K);
    g.support_exact = true;
    g.scale = K.diameter();
    g.envelope = Envelope{g.origin_value * std::exp(1.0), 1.0 / K.diameter()};
    return g;
}

/// mu(K cap (K + x)) for a measure with log-concave density.  Exact clipping
/// of the intersection, fixed-order simplex quadrature for the density; the
/// declared budget is the approximate number of density evaluations.
inline LogConcaveFn weighted_covariogram_function(const ConvexBody& K, const Measure& mu,
                                                  std::size_t budget = 20000) {
    if (K.dimension() > 3)
        throw std::invalid_argument("weighted covariogram requires dimension <= 3");
    LogConcaveFn g;
    g.dimension = K.dimension();
    ConvexBody body = K;
    auto density = mu.density.eval;
    const int n = K.dimension();
    g.eval = [body, density, budget, n](const Point& x) -> double {
        if (n == 1) {
            double len = body.vertices()[1][0] - body.vertices()[0][0];
            double lo = body.vertices()[0][0], hi = body.vertices()[1][0];
            double a = std::max(lo, lo + x[0]), b = std::min(hi, hi + x[0]);
            (void)len;
            if (b <= a) return 0.0;
            std::size_t cells = std::max<std::size_t>(budget / 4, 1);
            double h = (b - a) / cells, s = 0.0;
            for (std::size_t i = 0; i < cells; ++i)
                s += fixed_legendre([&](double t) { return density(Point{t}); }, a + i * h,
                                    a + (i + 1) * h, 4);
            return s;
        }
        if (n == 2) {
            detail::Polygon poly;
            if (!detail::intersection_polygon(body, x, poly)) return 0.0;
            int levels = detail::subdivision_levels(budget, poly.size(), 7, 2);
            return detail::integrate_polygon(poly, density, levels);
        }
        detail::Poly3 work;
        if (!detail::intersection_poly3(body, x, work)) return 0.0;
        int levels = detail::subdivision_levels(budget, detail::poly3_triangle_count(work), 4, 3);
        return detail::integrate_poly3(work, density, levels);
    };
    g.origin_value = g.eval(Point(K.dimension(), 0.0));
    g.origin_interior = true;
    g.full_support = false;
    g.support_hint = difference_body(K);
    g.support_exact = true;
    g.scale = K.diameter();
    g.envelope = Envelope{g.origin_value * std::exp(1.0), 1.0 / K.diameter()};
    return g;
}

namespace detail {

/// Truncation box for integrating expressions in a full-support f.
inline ConvexBody integration_domain(const LogConcaveFn& f, double tail_tol) {
    if (!f.full_support && f.support_hint) {
        if (f.support_hint->type() == BodyType::Ball) {
            auto [lo, hi] = f.support_hint->bounding_box();
            return ConvexBody::box(lo, hi);
        }
        return *f.support_hint;
    }
    double a = f.envelope ? f.envelope->a : f.origin_value * std::exp(1.0);
    double c = f.envelope ? f.envelope->c : 1.0 / f.scale;
    double L = std::max(f.scale, std::log(std::max(a / (tail_tol * f.origin_value), 10.0)) / c);
    Point lo(f.dimension, -L), hi(f.dimension, L);
    return ConvexBody::box(lo, hi);
}

}  // namespace detail

/// L2 covariogram C_f(x) = integral of f(y) f(x+y) dy.
inline LogConcaveFn l2_covariogram_function(const LogConcaveFn& f, std::size_t budget = 20000) {
    ConvexBody domain = detail::integration_domain(f, 1e-9);
    LogConcaveFn g;
    g.dimension = f.dimension;
    auto ff = f.eval;
    g.eval = [ff, domain, budget](const Point& x) {
        return detail::integrate_over_body(
            domain, [&](const Point& y) { return ff(y) * ff(added(x, y)); }, budget);
    };
    g.origin_value = g.eval(Point(f.dimension, 0.0));
    g.origin_interior = true;
    g.full_support = f.full_support;
    if (!f.full_support && f.support_hint) {
        g.support_hint = difference_body(*f.support_hint);
        g.support_exact = f.support_exact;
    }
    g.scale = f.scale;
    g.envelope = Envelope{g.origin_value * std::exp(1.0),
                          f.envelope ? 0.5 * f.envelope->c : 0.5 / f.scale};
    return g;
}

/// L1 covariogram: integral of min{f(y), f(x+y)} dy.
inline LogConcaveFn l1_covariogram_function(const LogConcaveFn& f, std::size_t budget = 20000) {
    ConvexBody domain = detail::integration_domain(f, 1e-9);
    LogConcaveFn g;
    g.dimension = f.dimension;
    auto ff = f.eval;
    g.eval = [ff, domain, budget](const Point& x) {
        return detail::integrate_over_body(
            domain, [&](const Point& y) { return std::min(ff(y), ff(added(x, y))); }, budget);
    };
    g.origin_value = g.eval(Point(f.dimension, 0.0));
    g.origin_interior = true;
    g.full_support = f.full_support;
    if (!f.full_support && f.support_hint) {
        g.support_hint = difference_body(*f.support_hint);
        g.support_exact = f.support_exact;
    }
    g.scale = f.scale;
    g.envelope = Envelope{g.origin_value * std::exp(1.0),
                          f.envelope ? 0.5 * f.envelope->c : 0.5 / f.scale};
    return g;
}

/// m-th order covariogram on (R^n)^m: Vol(K cap_i (K + x_i)).
/// Exact clipping when n*m <= 6; larger products must use the MC variant.
inline LogConcaveFn morder_covariogram_function(const ConvexBody& K, int m, bool monte_carlo = false,
                                                std::size_t mc_samples = 100000,
                                                std::uint64_t seed = 0) {
    if (m < 1) throw std::invalid_argument("order m must be >= 1");
    const int n = K.dimension();
    if (!monte_carlo && n * m > 6) throw std::invalid_argument("use monte-carlo mode");
    LogConcaveFn g;
    g.dimension = n * m;
    ConvexBody body = K;
    if (!monte_carlo) {
        g.eval = [body, m, n](const Point& xs) -> double {
            const double sliver = 1e-14 * volume(body);
            if (n == 1) {
                double lo = body.vertices()[0][0], hi = body.vertices()[1][0];
                double a = lo, b = hi;
                for (int i = 0; i < m; ++i) {
                    a = std::max(a, lo + xs[i]);
                    b = std::min(b, hi + xs[i]);
                }
                return std::max(b - a, 0.0);
            }
            if (n == 2) {
                thread_local detail::Polygon poly, scratch;
                poly.clear();
                for (const auto& v : body.vertices()) poly.push_back({v[0], v[1]});
                for (int i = 0; i < m; ++i) {
                    for (const auto& h : body.halfspaces()) {
                        double b = h.offset + h.normal[0] * xs[2 * i] + h.normal[1] * xs[2 * i + 1];
                        detail::clip_polygon(poly, {h.normal[0], h.normal[1]}, b, scratch);
                        if (poly.size() < 3) return 0.0;
                    }
                }
                double a = detail::polygon_area(poly);
                return a > sliver ? a : 0.0;
            }
            // n == 3, m <= 2
            thread_local detail::Poly3 work;
            Point first(xs.begin(), xs.begin() + 3);
            if (!detail::intersection_poly3(body, first, work)) return 0.0;
            const double eps = 1e-13 * body.diameter();
            for (int i = 1; i < m; ++i) {
                Point xi(xs.begin() + 3 * i, xs.begin() + 3 * (i + 1));
                for (const auto& h : body.halfspaces()) {
                    double b = h.offset + dot(h.normal, xi);
                    detail::clip_poly3(work, {h.normal[0], h.normal[1], h.normal[2]}, b, eps);
                    if (work.empty()) return 0.0;
                }
            }
            double v = detail::poly3_volume(work);
            return v > sliver ? v : 0.0;
        };
        g.origin_value = volume(K);
    } else {
        g.eval = [body, m, n, mc_samples, seed](const Point& xs) -> double {
            Rng rng(seed);
            auto [lo, hi] = body.bounding_box();
            double box_vol = 1.0;
            for (std::size_t i = 0; i < lo.size(); ++i) box_vol *= hi[i] - lo[i];
            std::size_t hits = 0;
            Point y(n);
            for (std::size_t s = 0; s < mc_samples; ++s) {
                for (int i = 0; i < n; ++i) y[i] = rng.uniform(lo[i], hi[i]);
                if (!body.contains(y)) continue;
                bool all = true;
                for (int i = 0; i < m && all; ++i) {
                    Point shifted(n);
                    for (int j = 0; j < n; ++j) shifted[j] = y[j] - xs[n * i + j];
                    all = body.contains(shifted);
                }
                if (all) ++hits;
            }
            return box_vol * static_cast<double>(hits) / mc_samples;
        };
        g.origin_value = g.eval(Point(n * m, 0.0));
    }
    g.origin_interior = true;
    g.full_support = false;
    g.support_exact = false;
    g.scale = K.diameter();
    g.envelope = Envelope{g.origin_value * std::exp(1.0), 1.0 / K.diameter()};
    return g;
}

/// m-th order L1 covariogram of f on (R^n)^m.
inline LogConcaveFn l1_morder_covariogram_function(const LogConcaveFn& f, int m,
                                                   std::size_t budget = 20000) {
    if (m < 1) throw std::invalid_argument("order m must be >= 1");
    ConvexBody domain = detail::integration_domain(f, 1e-9);
    const int n = f.dimension;
    LogConcaveFn g;
    g.dimension = n * m;
    auto ff = f.eval;
    g.eval = [ff, domain, budget, m, n](const Point& xs) {
        return detail::integrate_over_body(
            domain,
            [&](const Point& y) {
                double v = ff(y);
                for (int i = 0; i < m && v > 0.0; ++i) {
                    Point shifted(n);
                    for (int j = 0; j < n; ++j) shifted[j] = y[j] + xs[n * i + j];
                    v = std::min(v, ff(shifted));
                }
                return v;
            },
            budget);
    };
    g.origin_value = g.eval(Point(n * m, 0.0));
    g.origin_interior = true;
    g.full_support = f.full_support;
    g.scale = f.scale;
    g.envelope = Envelope{g.origin_value * std::exp(1.0),
                          f.envelope ? 0.5 * f.envelope->c : 0.5 / f.scale};
    return g;
}

// ---------------------------------------------------------------------------
// Envelope fitting and validation
// ---------------------------------------------------------------------------

/// Fit (a, c) with g <= a e^{-c|x|}: a starts at g(o), c from two-point
/// log-slopes at diameter-scale probes, then the bound is verified on a
/// seeded cloud and a widened until it holds.
inline Envelope fit_envelope(const LogConcaveFn& g, std::size_t verify_samples = 1000,
                             std::uint64_t seed = 12345) {
    double R = 2.0 * (std::isfinite(g.scale) ? g.scale : 1.0);
    double c = kInf;
    DirectionGrid dirs = make_direction_grid(g.dimension, std::max(2 * g.dimension, 6),
                                             GridScheme::SeededRandom, seed);
    for (const auto& th : dirs.directions) {
        for (double r : {R, 2.0 * R}) {
            double v = g.eval(scaled(th, r));
            if (v > 0.0) c = std::min(c, (std::log(g.origin_value) - std::log(v)) / r);
        }
    }
    if (!std::isfinite(c) || c <= 0.0) c = 1.0 / R;  // compact support: any rate works
    double a = g.origin_value;
    Rng rng(seed);
    for (int rounds = 0; rounds < 64; ++rounds) {
        double worst = 1.0;
        for (std::size_t i = 0; i < verify_samples; ++i) {
            Point x(g.dimension);
            for (int j = 0; j < g.dimension; ++j) x[j] = 3.0 * R * rng.gaussian();
            double bound = a * std::exp(-c * norm(x));
            double v = g.eval(x);
            if (v > bound) worst = std::max(worst, v / bound);
        }
        if (worst == 1.0) break;
        a *= 2.0 * worst;
    }
    return Envelope{a, c};
}

struct TripleTestReport {
    double worst_violation = 0.0;  // positive means log-concavity failed
    double worst_max_excess = 0.0;  // positive means a value exceeded g(o)
    std::size_t tested = 0;
};

/// Spot check of the class invariants: max at the origin and midpoint
/// log-concavity on seeded collinear triples.
inline TripleTestReport validate_logconcave(const LogConcaveFn& g, std::size_t triples = 1000,
                                            std::uint64_t seed = 2024) {
    Rng rng(seed);
    TripleTestReport rep;
    // sample inside the support bounding box when one is known, so most
    // draws land where the function is positive
    Point lo(g.dimension), hi(g.dimension);
    if (g.support_hint) {
        std::tie(lo, hi) = g.support_hint->bounding_box();
    } else {
        double box = std::isfinite(g.scale) ? 2.0 * g.scale : 2.0;
        lo.assign(g.dimension, -box);
        hi.assign(g.dimension, box);
    }
    std::size_t made = 0, guard = 0;
    while (made < triples && guard < 50 * triples) {
        ++guard;
        Point x(g.dimension), y(g.dimension);
        for (int j = 0; j < g.dimension; ++j) {
            x[j] = rng.uniform(lo[j], hi[j]);
            y[j] = rng.uniform(lo[j], hi[j]);
        }
        double fx = g.eval(x), fy = g.eval(y);
        rep.worst_max_excess =
            std::max(rep.worst_max_excess,
                     std::max(fx, fy) / g.origin_value - (1.0 + 1e-12));
        if (fx <= 0.0 || fy <= 0.0) continue;
        double lam = rng.uniform(0.05, 0.95);
        Point mid = added(scaled(x, 1.0 - lam), scaled(y, lam));
        double fm = g.eval(mid);
        double rhs = (1.0 - lam) * std::log(fx) + lam * std::log(fy);
        double lhs = fm > 0.0 ? std::log(fm) : -kInf;
        double viol = (rhs - lhs) / std::max(1.0, std::fabs(rhs));
        rep.worst_violation = std::max(rep.worst_violation, viol);
        ++made;
    }
    rep.tested = made;
    return rep;
}

// ---------------------------------------------------------------------------
// Gaussian mollification with recentering
// ---------------------------------------------------------------------------

struct MollifySpec {
    std::size_t hermite_nodes = 64;   // per axis, n <= 2
    std::size_t mc_samples = 200000;  // n >= 3
    std::uint64_t seed = 0;
    int argmax_max_iter = 400;
    double argmax_tol = 1e-9;
};

/// Thrown when the argmax search stalls; carries the best iterate found.
class ArgmaxError : public std::runtime_error {
public:
    ArgmaxError(std::string what, Point best) : std::runtime_error(std::move(what)), best_iterate(std::move(best)) {}
    Point best_iterate;
};

namespace detail {

/// Golden-section maximization of a 1D unimodal function on [lo, hi].
template <typename F>
double golden_max(F&& f, double lo, double hi, double tol) {
    const double inv_phi = 0.6180339887498949;
    double a = lo, b = hi;
    double x1 = b - inv_phi * (b - a), x2 = a + inv_phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > tol) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace detail

struct MollifyResult {
    LogConcaveFn fn;
    Point recenter_offset;  // x(k), the argmax of the raw convolution
};

/// g_k(x) = (g * gamma_k)(x + x(k)) with gamma_k the Gaussian of variance
/// 2/k and x(k) the argmax of the convolution, so the result is smooth,
/// strictly positive, and attains its maximum at the origin.
inline MollifyResult mollify_detailed(const LogConcaveFn& g, int k, const MollifySpec& spec = {}) {
    if (k < 1) throw std::invalid_argument("mollification index k must be >= 1");
    const int n = g.dimension;
    const double sigma = std::sqrt(2.0 / k);
    auto geval = g.eval;

    std::function<double(const Point&)> smooth;
    if (n <= 2 && !g.full_support && g.support_hint) {
        // bounded support: integrate in y over support-pinned composite
        // panels.  Nodes do not move with x, so the approximation is
        // analytic in x; Gauss-Hermite would ring at the support boundary
        // and plant spurious argmaxes.
        auto [lo, hi] = g.support_hint->bounding_box();
        double kernel_norm = std::pow(2.0 * M_PI * sigma * sigma, -0.5 * n);
        std::vector<std::vector<double>> axis_nodes(n), axis_weights(n);
        for (int ax = 0; ax < n; ++ax) {
            std::size_t panels = std::clamp<std::size_t>(
                static_cast<std::size_t>(std::ceil((hi[ax] - lo[ax]) / (0.5 * sigma))), 16, 200);
            const QuadratureRule& gl = cached_legendre(8);
            double hpanel = (hi[ax] - lo[ax]) / panels;
            for (std::size_t pnl = 0; pnl < panels; ++pnl) {
                double a = lo[ax] + pnl * hpanel;
                for (std::size_t q = 0; q < gl.nodes.size(); ++q) {
                    axis_nodes[ax].push_back(a + 0.5 * hpanel * (1.0 + gl.nodes[q]));
                    axis_weights[ax].push_back(0.5 * hpanel * gl.weights[q]);
                }
            }
        }
        double inv_two_var = 1.0 / (2.0 * sigma * sigma);
        if (n == 1) {
            auto nodes = axis_nodes[0];
            auto weights = axis_weights[0];
            smooth = [geval, nodes, weights, kernel_norm, inv_two_var](const Point& x) {
                double s = 0.0;
                for (std::size_t i = 0; i < nodes.size(); ++i) {
                    double d = x[0] - nodes[i];
                    double q = d * d * inv_two_var;
                    if (q > 500.0) continue;
                    s += weights[i] * geval({nodes[i]}) * std::exp(-q);
                }
                return kernel_norm * s;
            };
        } else {
            auto nx = axis_nodes[0], wx = axis_weights[0];
            auto ny = axis_nodes[1], wy = axis_weights[1];
            // g tabulated once on the fixed tensor grid; later evaluations
            // only touch the gaussian kernel
            auto values = std::make_shared<std::vector<double>>(nx.size() * ny.size());
            {
                Point y(2);
                for (std::size_t i = 0; i < nx.size(); ++i) {
                    y[0] = nx[i];
                    for (std::size_t j = 0; j < ny.size(); ++j) {
                        y[1] = ny[j];
                        (*values)[i * ny.size() + j] = geval(y);
                    }
                }
            }
            smooth = [nx, wx, ny, wy, values, kernel_norm, inv_two_var](const Point& x) {
                double s = 0.0;
                for (std::size_t i = 0; i < nx.size(); ++i) {
                    double dx = x[0] - nx[i];
                    double qx = dx * dx * inv_two_var;
                    if (qx > 500.0) continue;
                    double row = 0.0;
                    for (std::size_t j = 0; j < ny.size(); ++j) {
                        double dy = x[1] - ny[j];
                        double q = qx + dy * dy * inv_two_var;
                        if (q > 500.0) continue;
                        row += wy[j] * (*values)[i * ny.size() + j] * std::exp(-q);
                    }
                    s += wx[i] * row;
                }
                return kernel_norm * s;
            };
        }
    } else if (n <= 2) {
        QuadratureRule h = gauss_hermite(spec.hermite_nodes);
        double norm_const = std::pow(M_PI, -0.5 * n);
        double step = sigma * std::sqrt(2.0);
        if (n == 1) {
            smooth = [geval, h, norm_const, step](const Point& x) {
                double s = 0.0;
                for (std::size_t i = 0; i < h.nodes.size(); ++i)
                    s += h.weights[i] * geval({x[0] + step * h.nodes[i]});
                return norm_const * s;
            };
        } else {
            smooth = [geval, h, norm_const, step](const Point& x) {
                double s = 0.0;
                Point y(2);
                for (std::size_t i = 0; i < h.nodes.size(); ++i) {
                    y[0] = x[0] + step * h.nodes[i];
                    double row = 0.0;
                    for (std::size_t j = 0; j < h.nodes.size(); ++j) {
                        y[1] = x[1] + step * h.nodes[j];
                        row += h.weights[j] * geval(y);
                    }
                    s += h.weights[i] * row;
                }
                return norm_const * s;
            };
        }
    } else {
        // fixed gaussian bank; the bank is shared across evaluations so the
        // estimator is a deterministic smooth function of x
        auto bank = std::make_shared<std::vector<Point>>();
        Rng rng(spec.seed ^ 0xabcdef12345ull);
        for (std::size_t s = 0; s < spec.mc_samples; ++s) {
            Point z(n);
            for (int j = 0; j < n; ++j) z[j] = rng.gaussian();
            bank->push_back(std::move(z));
        }
        smooth = [geval, bank, sigma, n](const Point& x) {
            double s = 0.0;
            Point y(n);
            for (const auto& z : *bank) {
                for (int j = 0; j < n; ++j) y[j] = x[j] + sigma * z[j];
                s += geval(y);
            }
            return s / bank->size();
        };
    }

    // argmax of the log-concave convolution by cyclic coordinate search with
    // golden-section line minimizations
    Point xk(n, 0.0);
    double fbest = smooth(xk);
    double bracket = std::max(2.0 * sigma, std::isfinite(g.scale) ? 0.5 * g.scale : 1.0);
    bool converged = false;
    for (int iter = 0; iter < spec.argmax_max_iter; ++iter) {
        double moved = 0.0;
        for (int axis = 0; axis < n; ++axis) {
            Point probe = xk;
            auto line = [&](double t) {
                probe[axis] = xk[axis] + t;
                return smooth(probe);
            };
            double t = detail::golden_max(line, -bracket, bracket, spec.argmax_tol * (1.0 + bracket));
            if (std::fabs(t) > 0.0) {
                xk[axis] += t;
                moved = std::max(moved, std::fabs(t));
            }
        }
        double fnew = smooth(xk);
        if (fnew < fbest) fnew = fbest;
        bool small_move = moved < 4.0 * spec.argmax_tol * (1.0 + bracket);
        bool small_gain = fnew - fbest <= spec.argmax_tol * std::fabs(fbest);
        fbest = std::max(fbest, fnew);
        if (small_move && small_gain && iter > 0) {
            converged = true;
            break;
        }
        bracket = std::max(4.0 * spec.argmax_tol * (1.0 + bracket), 0.5 * bracket);
    }
    if (!converged)
        throw ArgmaxError("mollify: argmax search did not converge", xk);

    // tie-break toward the smallest |x|: walk the flat part of the argmax
    // set toward the origin
    double r = norm(xk);
    if (r > 0.0) {
        Point dir = scaled(xk, -1.0 / r);
        auto along = [&](double t) { return smooth(added(xk, scaled(dir, t))); };
        double lo = 0.0, hi = r;
        for (int i = 0; i < 50; ++i) {
            double mid = 0.5 * (lo + hi);
            if (along(mid) >= fbest * (1.0 - 1e-13))
                lo = mid;
            else
                hi = mid;
        }
        if (lo > 0.0) xk = added(xk, scaled(dir, lo));
        fbest = std::max(fbest, smooth(xk));
    }

    LogConcaveFn out;
    out.dimension = n;
    Point shift = xk;
    out.eval = [smooth, shift](const Point& x) { return smooth(added(x, shift)); };
    out.origin_value = fbest;
    out.origin_interior = true;
    out.full_support = true;
    out.scale = std::isfinite(g.scale) ? g.scale + sigma : 1.0 + sigma;
    out.envelope = fit_envelope(out, 400, spec.seed ^ 77);
    return {std::move(out), std::move(xk)};
}

inline LogConcaveFn mollify(const LogConcaveFn& g, int k, const MollifySpec& spec = {}) {
    return mollify_detailed(g, k, spec).fn;
}

}  // namespace radialbodies
