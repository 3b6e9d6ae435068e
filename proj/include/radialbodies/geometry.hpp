#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "radialbodies/rng.hpp"

namespace radialbodies {

using Point = std::vector<double>;

inline double dot(const Point& a, const Point& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm(const Point& a) { return std::sqrt(dot(a, a)); }

inline Point scaled(const Point& a, double t) {
    Point r(a);
    for (double& c : r) c *= t;
    return r;
}

inline Point added(const Point& a, const Point& b) {
    Point r(a);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] += b[i];
    return r;
}

inline Point subtracted(const Point& a, const Point& b) {
    Point r(a);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
    return r;
}

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Closed halfspace {y : <normal, y> <= offset} with unit normal.
struct HalfSpace {
    Point normal;
    double offset;

    HalfSpace(Point n, double b) : normal(std::move(n)), offset(b) {
        double len = norm(normal);
        if (!(len > 0.0)) throw std::invalid_argument("halfspace normal must be nonzero");
        if (std::fabs(len - 1.0) > 1e-12) {
            for (double& c : normal) c /= len;
            offset /= len;
        }
    }
};

namespace detail {

using V2 = std::array<double, 2>;
using V3 = std::array<double, 3>;
using Polygon = std::vector<V2>;

inline double cross2(const V2& o, const V2& a, const V2& b) {
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

inline Polygon convex_hull_2d(Polygon pts) {
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    const std::size_t n = pts.size();
    if (n < 3) return pts;
    Polygon hull(2 * n);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {
        while (k >= 2 && cross2(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    for (std::size_t i = n - 1, t = k + 1; i-- > 0;) {
        while (k >= t && cross2(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);  // counter-clockwise
    return hull;
}

inline double polygon_area(const Polygon& p) {
    double s = 0.0;
    for (std::size_t i = 0, n = p.size(); i < n; ++i) {
        const V2& a = p[i];
        const V2& b = p[(i + 1) % n];
        s += a[0] * b[1] - b[0] * a[1];
    }
    return 0.5 * s;
}

/// Sutherland-Hodgman step: keep the side <n, y> <= b.
inline void clip_polygon(Polygon& poly, const V2& n, double b, Polygon& scratch) {
    scratch.clear();
    const std::size_t m = poly.size();
    if (m == 0) return;
    for (std::size_t i = 0; i < m; ++i) {
        const V2& cur = poly[i];
        const V2& nxt = poly[(i + 1) % m];
        double dc = n[0] * cur[0] + n[1] * cur[1] - b;
        double dn = n[0] * nxt[0] + n[1] * nxt[1] - b;
        if (dc <= 0.0) scratch.push_back(cur);
        if ((dc < 0.0 && dn > 0.0) || (dc > 0.0 && dn < 0.0)) {
            double t = dc / (dc - dn);
            scratch.push_back({cur[0] + t * (nxt[0] - cur[0]), cur[1] + t * (nxt[1] - cur[1])});
        }
    }
    poly.swap(scratch);
}

inline V3 cross3(const V3& a, const V3& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

inline double dot3(const V3& a, const V3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

inline V3 sub3(const V3& a, const V3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }

/// Convex polyhedron as planar faces with outward-CCW vertex loops; loops
/// are concatenated into one index buffer with offsets so copies are plain
/// buffer copies (the covariogram clips one of these per evaluation).
struct Poly3 {
    std::vector<V3> v;
    std::vector<int> face_data;
    std::vector<int> face_off{0};  // face i occupies [face_off[i], face_off[i+1])

    std::size_t face_count() const { return face_off.size() - 1; }
    bool empty() const { return face_off.size() <= 1; }
    void clear() {
        v.clear();
        face_data.clear();
        face_off.assign(1, 0);
    }
};

inline double poly3_volume(const Poly3& p) {
    double six_vol = 0.0;
    for (std::size_t f = 0; f < p.face_count(); ++f) {
        int begin = p.face_off[f], end = p.face_off[f + 1];
        const V3& a = p.v[p.face_data[begin]];
        for (int i = begin + 1; i + 1 < end; ++i) {
            const V3& b = p.v[p.face_data[i]];
            const V3& c = p.v[p.face_data[i + 1]];
            six_vol += dot3(a, cross3(b, c));
        }
    }
    return six_vol / 6.0;
}

/// Incremental 3D convex hull; returns outward-oriented triangles.
/// Throws if the point set is not full-dimensional.
inline Poly3 convex_hull_3d(const std::vector<V3>& pts) {
    const std::size_t n = pts.size();
    if (n < 4) throw std::invalid_argument("3D hull needs at least 4 points");
    double diag = 0.0;
    for (int c = 0; c < 3; ++c) {
        double lo = kInf, hi = -kInf;
        for (const auto& p : pts) {
            lo = std::min(lo, p[c]);
            hi = std::max(hi, p[c]);
        }
        diag = std::max(diag, hi - lo);
    }
    const double eps = 1e-12 * std::max(diag, 1.0);

    // initial simplex from extreme points
    std::size_t i0 = 0, i1 = 0;
    for (std::size_t i = 1; i < n; ++i)
        if (pts[i] < pts[i0]) i0 = i;
    double best = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
        double d = dot3(sub3(pts[i], pts[i0]), sub3(pts[i], pts[i0]));
        if (d > best) {
            best = d;
            i1 = i;
        }
    }
    std::size_t i2 = i0;
    best = -1.0;
    V3 e01 = sub3(pts[i1], pts[i0]);
    for (std::size_t i = 0; i < n; ++i) {
        V3 c = cross3(e01, sub3(pts[i], pts[i0]));
        double d = dot3(c, c);
        if (d > best) {
            best = d;
            i2 = i;
        }
    }
    if (best <= eps * eps * dot3(e01, e01))
        throw std::invalid_argument("degenerate polytope: points are collinear");
    std::size_t i3 = i0;
    best = 0.0;
    V3 nrm = cross3(e01, sub3(pts[i2], pts[i0]));
    for (std::size_t i = 0; i < n; ++i) {
        double d = dot3(nrm, sub3(pts[i], pts[i0]));
        if (std::fabs(d) > std::fabs(best)) {
            best = d;
            i3 = i;
        }
    }
    if (std::fabs(best) <= eps * std::sqrt(dot3(nrm, nrm)))
        throw std::invalid_argument("degenerate polytope: points are coplanar");

    struct Tri {
        int a, b, c;
        V3 n;
        double d;
        bool alive = true;
    };
    std::vector<Tri> tris;
    auto add_tri = [&](int a, int b, int c) {
        Tri t;
        t.a = a;
        t.b = b;
        t.c = c;
        t.n = cross3(sub3(pts[b], pts[a]), sub3(pts[c], pts[a]));
        t.d = dot3(t.n, pts[a]);
        tris.push_back(t);
    };
    int a = static_cast<int>(i0), b = static_cast<int>(i1), c = static_cast<int>(i2),
        d = static_cast<int>(i3);
    if (best > 0.0) std::swap(b, c);  // make i3 lie below (a,b,c)
    add_tri(a, b, c);
    add_tri(a, c, d);
    add_tri(a, d, b);
    add_tri(b, d, c);

    for (std::size_t i = 0; i < n; ++i) {
        if (i == i0 || i == i1 || i == i2 || i == i3) continue;
        std::vector<int> visible;
        for (std::size_t t = 0; t < tris.size(); ++t) {
            if (!tris[t].alive) continue;
            double len = std::sqrt(dot3(tris[t].n, tris[t].n));
            if (dot3(tris[t].n, pts[i]) - tris[t].d > eps * std::max(len, 1e-300))
                visible.push_back(static_cast<int>(t));
        }
        if (visible.empty()) continue;
        std::map<std::pair<int, int>, int> edge_count;
        for (int t : visible) {
            const Tri& tr = tris[t];
            int e[3][2] = {{tr.a, tr.b}, {tr.b, tr.c}, {tr.c, tr.a}};
            for (auto& ed : e) edge_count[{ed[0], ed[1]}]++;
            tris[t].alive = false;
        }
        for (const auto& [edge, cnt] : edge_count) {
            (void)cnt;
            // horizon edges are those whose reverse is not among visible faces
            if (edge_count.count({edge.second, edge.first}) == 0)
                add_tri(edge.first, edge.second, static_cast<int>(i));
        }
    }

    Poly3 out;
    std::vector<int> remap(n, -1);
    for (const Tri& t : tris) {
        if (!t.alive) continue;
        for (int idx : {t.a, t.b, t.c}) {
            if (remap[idx] < 0) {
                remap[idx] = static_cast<int>(out.v.size());
                out.v.push_back(pts[idx]);
            }
        }
        out.face_data.push_back(remap[t.a]);
        out.face_data.push_back(remap[t.b]);
        out.face_data.push_back(remap[t.c]);
        out.face_off.push_back(static_cast<int>(out.face_data.size()));
    }
    return out;
}

/// Clip a convex polyhedron by {<n, y> <= b} in place.  All scratch lives
/// in thread-local buffers: the covariogram quadratures call this in a hot
/// loop and per-face allocations dominate otherwise.
inline void clip_poly3(Poly3& p, const V3& n, double b, double eps) {
    if (p.empty()) return;
    thread_local std::vector<double> dist;
    const std::size_t nv = p.v.size();
    dist.resize(nv);
    bool any_in = false, any_out = false;
    for (std::size_t i = 0; i < nv; ++i) {
        dist[i] = dot3(n, p.v[i]) - b;
        (dist[i] <= eps ? any_in : any_out) = true;
    }
    if (!any_out) return;
    if (!any_in) {
        p.clear();
        return;
    }

    thread_local std::vector<std::array<int, 3>> cuts;  // (lo, hi, new index)
    cuts.clear();
    auto cut = [&](int i, int j) {
        int a = std::min(i, j), c = std::max(i, j);
        for (const auto& e : cuts)
            if (e[0] == a && e[1] == c) return e[2];
        double t = dist[i] / (dist[i] - dist[j]);
        V3 q = {p.v[i][0] + t * (p.v[j][0] - p.v[i][0]),
                p.v[i][1] + t * (p.v[j][1] - p.v[i][1]),
                p.v[i][2] + t * (p.v[j][2] - p.v[i][2])};
        int idx = static_cast<int>(p.v.size());
        p.v.push_back(q);
        dist.push_back(0.0);
        cuts.push_back({a, c, idx});
        return idx;
    };

    thread_local std::vector<int> out_data, out_off;
    out_data.clear();
    out_off.assign(1, 0);
    for (std::size_t f = 0; f < p.face_count(); ++f) {
        int begin = p.face_off[f], end = p.face_off[f + 1];
        std::size_t start = out_data.size();
        for (int i = begin; i < end; ++i) {
            int cur = p.face_data[i];
            int nxt = p.face_data[i + 1 < end ? i + 1 : begin];
            bool cin = dist[cur] <= eps, nin = dist[nxt] <= eps;
            if (cin) out_data.push_back(cur);
            if (cin != nin && dist[cur] * dist[nxt] < 0.0) out_data.push_back(cut(cur, nxt));
        }
        if (out_data.size() - start >= 3)
            out_off.push_back(static_cast<int>(out_data.size()));
        else
            out_data.resize(start);
    }

    if (cuts.size() >= 3) {
        // order the cap loop by angle in the clip plane, oriented along +n
        V3 centroid = {0, 0, 0};
        for (const auto& e : cuts)
            for (int k = 0; k < 3; ++k) centroid[k] += p.v[e[2]][k] / cuts.size();
        V3 trial = std::fabs(n[0]) < 0.9 ? V3{1, 0, 0} : V3{0, 1, 0};
        V3 axis1 = cross3(n, trial);
        double len = std::sqrt(dot3(axis1, axis1));
        for (auto& c : axis1) c /= len;
        V3 axis2 = cross3(n, axis1);
        thread_local std::vector<std::pair<double, int>> angled;
        angled.clear();
        for (const auto& e : cuts) {
            V3 r = sub3(p.v[e[2]], centroid);
            angled.push_back({std::atan2(dot3(r, axis2), dot3(r, axis1)), e[2]});
        }
        std::sort(angled.begin(), angled.end());
        // Newell normal of the sorted loop decides the orientation; a pair
        // of near-duplicate points cannot flip it the way two edge vectors
        // could
        V3 newell = {0, 0, 0};
        for (std::size_t i = 0; i < angled.size(); ++i) {
            const V3& a = p.v[angled[i].second];
            const V3& c = p.v[angled[(i + 1) % angled.size()].second];
            newell[0] += (a[1] - c[1]) * (a[2] + c[2]);
            newell[1] += (a[2] - c[2]) * (a[0] + c[0]);
            newell[2] += (a[0] - c[0]) * (a[1] + c[1]);
        }
        if (dot3(newell, n) >= 0.0) {
            for (const auto& [ang, i] : angled) out_data.push_back(i);
        } else {
            for (auto it = angled.rbegin(); it != angled.rend(); ++it)
                out_data.push_back(it->second);
        }
        out_off.push_back(static_cast<int>(out_data.size()));
    }
    p.face_data.swap(out_data);
    p.face_off.swap(out_off);
}

inline double solve3(const std::array<std::array<double, 3>, 3>& A, const V3& rhs, V3& out) {
    double det = A[0][0] * (A[1][1] * A[2][2] - A[1][2] * A[2][1]) -
                 A[0][1] * (A[1][0] * A[2][2] - A[1][2] * A[2][0]) +
                 A[0][2] * (A[1][0] * A[2][1] - A[1][1] * A[2][0]);
    if (det == 0.0) return 0.0;
    auto det3 = [](double a11, double a12, double a13, double a21, double a22, double a23,
                   double a31, double a32, double a33) {
        return a11 * (a22 * a33 - a23 * a32) - a12 * (a21 * a33 - a23 * a31) +
               a13 * (a21 * a32 - a22 * a31);
    };
    out[0] = det3(rhs[0], A[0][1], A[0][2], rhs[1], A[1][1], A[1][2], rhs[2], A[2][1], A[2][2]) / det;
    out[1] = det3(A[0][0], rhs[0], A[0][2], A[1][0], rhs[1], A[1][2], A[2][0], rhs[2], A[2][2]) / det;
    out[2] = det3(A[0][0], A[0][1], rhs[0], A[1][0], A[1][1], rhs[1], A[2][0], A[2][1], rhs[2]) / det;
    return det;
}

}  // namespace detail

enum class BodyType { VertexPolytope, HalfspacePolytope, Ball, Box };

/// Compact convex set with non-empty interior.  Polytopes in dimension <= 3
/// carry both a vertex and a halfspace description computed at construction;
/// balls and boxes keep their closed forms in any dimension.
class ConvexBody {
public:
    static ConvexBody polytope(int dim, std::vector<Point> vertices);
    static ConvexBody from_halfspaces(int dim, std::vector<HalfSpace> hs);
    static ConvexBody ball(Point center, double radius);
    static ConvexBody box(Point lo, Point hi);

    int dimension() const { return dim_; }
    BodyType type() const { return type_; }

    const std::vector<Point>& vertices() const {
        if (vertices_.empty()) throw std::logic_error("body has no vertex description");
        return vertices_;
    }
    const std::vector<HalfSpace>& halfspaces() const {
        if (halfspaces_.empty()) throw std::logic_error("body has no halfspace description");
        return halfspaces_;
    }
    const Point& ball_center() const { return ball_center_; }
    double ball_radius() const { return ball_radius_; }
    const Point& box_lo() const { return box_lo_; }
    const Point& box_hi() const { return box_hi_; }

    double diameter() const { return diameter_; }
    std::pair<Point, Point> bounding_box() const { return {bbox_lo_, bbox_hi_}; }

    bool contains(const Point& x, double tol = 0.0) const;

private:
    ConvexBody() = default;
    void finish_setup();

    int dim_ = 0;
    BodyType type_ = BodyType::VertexPolytope;
    std::vector<Point> vertices_;
    std::vector<HalfSpace> halfspaces_;
    Point ball_center_;
    double ball_radius_ = 0.0;
    Point box_lo_, box_hi_;
    Point bbox_lo_, bbox_hi_;
    double diameter_ = 0.0;
};

namespace detail {

inline std::vector<HalfSpace> halfspaces_from_hull_2d(const Polygon& hull) {
    std::vector<HalfSpace> hs;
    const std::size_t n = hull.size();
    for (std::size_t i = 0; i < n; ++i) {
        const V2& a = hull[i];
        const V2& b = hull[(i + 1) % n];
        // CCW polygon: outward normal is the edge rotated by -90 degrees
        Point nrm = {b[1] - a[1], a[0] - b[0]};
        double off = nrm[0] * a[0] + nrm[1] * a[1];
        hs.emplace_back(std::move(nrm), off);
    }
    return hs;
}

inline std::vector<HalfSpace> halfspaces_from_hull_3d(const Poly3& hull) {
    std::vector<HalfSpace> hs;
    std::vector<std::array<double, 4>> seen;
    for (std::size_t fi = 0; fi < hull.face_count(); ++fi) {
        const int* f = hull.face_data.data() + hull.face_off[fi];
        V3 n = cross3(sub3(hull.v[f[1]], hull.v[f[0]]), sub3(hull.v[f[2]], hull.v[f[0]]));
        double len = std::sqrt(dot3(n, n));
        if (len <= 0.0) continue;
        std::array<double, 4> key = {n[0] / len, n[1] / len, n[2] / len,
                                     dot3(n, hull.v[f[0]]) / len};
        bool dup = false;
        for (const auto& s : seen) {
            if (std::fabs(s[0] - key[0]) < 1e-9 && std::fabs(s[1] - key[1]) < 1e-9 &&
                std::fabs(s[2] - key[2]) < 1e-9 && std::fabs(s[3] - key[3]) < 1e-9) {
                dup = true;
                break;
            }
        }
        if (dup) continue;
        seen.push_back(key);
        hs.emplace_back(Point{key[0], key[1], key[2]}, key[3]);
    }
    return hs;
}

inline Poly3 poly3_from_body_vertices(const std::vector<Point>& verts) {
    std::vector<V3> pts;
    pts.reserve(verts.size());
    for (const auto& v : verts) pts.push_back({v[0], v[1], v[2]});
    return convex_hull_3d(pts);
}

}  // namespace detail

inline void ConvexBody::finish_setup() {
    bbox_lo_.assign(dim_, kInf);
    bbox_hi_.assign(dim_, -kInf);
    if (type_ == BodyType::Ball) {
        for (int i = 0; i < dim_; ++i) {
            bbox_lo_[i] = ball_center_[i] - ball_radius_;
            bbox_hi_[i] = ball_center_[i] + ball_radius_;
        }
        diameter_ = 2.0 * ball_radius_;
        return;
    }
    if (type_ == BodyType::Box) {
        bbox_lo_ = box_lo_;
        bbox_hi_ = box_hi_;
        diameter_ = norm(subtracted(box_hi_, box_lo_));
        return;
    }
    for (const auto& v : vertices_) {
        for (int i = 0; i < dim_; ++i) {
            bbox_lo_[i] = std::min(bbox_lo_[i], v[i]);
            bbox_hi_[i] = std::max(bbox_hi_[i], v[i]);
        }
    }
    diameter_ = 0.0;
    for (const auto& a : vertices_)
        for (const auto& b : vertices_) diameter_ = std::max(diameter_, norm(subtracted(a, b)));
}

inline ConvexBody ConvexBody::polytope(int dim, std::vector<Point> vertices) {
    if (dim < 1) throw std::invalid_argument("dimension must be >= 1");
    for (const auto& v : vertices)
        if (static_cast<int>(v.size()) != dim)
            throw std::invalid_argument("vertex dimension mismatch");
    if (vertices.size() < static_cast<std::size_t>(dim) + 1)
        throw std::invalid_argument("polytope needs at least dim+1 vertices");
    ConvexBody body;
    body.dim_ = dim;
    body.type_ = BodyType::VertexPolytope;
    if (dim == 1) {
        double lo = kInf, hi = -kInf;
        for (const auto& v : vertices) {
            lo = std::min(lo, v[0]);
            hi = std::max(hi, v[0]);
        }
        if (!(hi > lo)) throw std::invalid_argument("degenerate polytope: empty interior");
        body.vertices_ = {{lo}, {hi}};
        body.halfspaces_ = {HalfSpace({1.0}, hi), HalfSpace({-1.0}, -lo)};
    } else if (dim == 2) {
        detail::Polygon pts;
        for (const auto& v : vertices) pts.push_back({v[0], v[1]});
        detail::Polygon hull = detail::convex_hull_2d(std::move(pts));
        if (hull.size() < 3 || detail::polygon_area(hull) <= 0.0)
            throw std::invalid_argument("degenerate polytope: empty interior");
        for (const auto& p : hull) body.vertices_.push_back({p[0], p[1]});
        body.halfspaces_ = detail::halfspaces_from_hull_2d(hull);
    } else if (dim == 3) {
        detail::Poly3 hull = detail::poly3_from_body_vertices(vertices);
        if (detail::poly3_volume(hull) <= 0.0)
            throw std::invalid_argument("degenerate polytope: empty interior");
        for (const auto& p : hull.v) body.vertices_.push_back({p[0], p[1], p[2]});
        body.halfspaces_ = detail::halfspaces_from_hull_3d(hull);
    } else {
        throw std::invalid_argument("vertex polytopes are supported in dimension <= 3");
    }
    body.finish_setup();
    return body;
}

inline ConvexBody ConvexBody::from_halfspaces(int dim, std::vector<HalfSpace> hs) {
    if (dim < 1 || dim > 3)
        throw std::invalid_argument("halfspace polytopes are supported in dimension <= 3");
    for (const auto& h : hs)
        if (static_cast<int>(h.normal.size()) != dim)
            throw std::invalid_argument("halfspace dimension mismatch");

    // vertex enumeration: intersect all dim-subsets of boundary hyperplanes,
    // keep feasible points; boundedness and full-dimensionality follow from
    // the hull of the result
    std::vector<Point> verts;
    const std::size_t m = hs.size();
    double scale = 1.0;
    for (const auto& h : hs) scale = std::max(scale, std::fabs(h.offset));
    const double feas_tol = 1e-9 * scale;
    if (dim == 1) {
        double lo = -kInf, hi = kInf;
        for (const auto& h : hs) {
            if (h.normal[0] > 0.0)
                hi = std::min(hi, h.offset / h.normal[0]);
            else
                lo = std::max(lo, h.offset / h.normal[0]);
        }
        if (!std::isfinite(lo) || !std::isfinite(hi)) throw std::invalid_argument("unbounded body");
        if (!(hi > lo)) throw std::invalid_argument("degenerate polytope: empty interior");
        verts = {{lo}, {hi}};
    } else if (dim == 2) {
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = i + 1; j < m; ++j) {
                double det = hs[i].normal[0] * hs[j].normal[1] - hs[i].normal[1] * hs[j].normal[0];
                if (std::fabs(det) < 1e-12) continue;
                Point p = {(hs[i].offset * hs[j].normal[1] - hs[j].offset * hs[i].normal[1]) / det,
                           (hs[i].normal[0] * hs[j].offset - hs[j].normal[0] * hs[i].offset) / det};
                bool ok = true;
                for (const auto& h : hs)
                    if (dot(h.normal, p) > h.offset + feas_tol) {
                        ok = false;
                        break;
                    }
                if (ok) verts.push_back(std::move(p));
            }
        }
    } else {
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = i + 1; j < m; ++j) {
                for (std::size_t k = j + 1; k < m; ++k) {
                    std::array<std::array<double, 3>, 3> A = {
                        {{hs[i].normal[0], hs[i].normal[1], hs[i].normal[2]},
                         {hs[j].normal[0], hs[j].normal[1], hs[j].normal[2]},
                         {hs[k].normal[0], hs[k].normal[1], hs[k].normal[2]}}};
                    detail::V3 sol;
                    if (std::fabs(detail::solve3(A, {hs[i].offset, hs[j].offset, hs[k].offset},
                                                 sol)) < 1e-10)
                        continue;
                    Point p = {sol[0], sol[1], sol[2]};
                    bool ok = true;
                    for (const auto& h : hs)
                        if (dot(h.normal, p) > h.offset + feas_tol) {
                            ok = false;
                            break;
                        }
                    if (ok) verts.push_back(std::move(p));
                }
            }
        }
    }
    if (verts.size() < static_cast<std::size_t>(dim) + 1)
        throw std::invalid_argument("degenerate polytope: empty interior");

    // a halfspace intersection with a recession direction has unbounded
    // support in that direction; enumerated vertices cannot witness it, so
    // test the normals for positive spanning on a direction sweep
    {
        std::vector<Point> probes;
        if (dim == 2) {
            for (int t = 0; t < 720; ++t) {
                double a = 2.0 * M_PI * t / 720.0;
                probes.push_back({std::cos(a), std::sin(a)});
            }
        } else if (dim == 3) {
            for (int t = 0; t < 4000; ++t) {
                double z = 1.0 - 2.0 * (t + 0.5) / 4000.0;
                double r = std::sqrt(std::max(0.0, 1.0 - z * z));
                double a = 2.39996322972865332 * t;
                probes.push_back({r * std::cos(a), r * std::sin(a), z});
            }
        }
        for (const auto& th : probes) {
            double best = -kInf;
            for (const auto& h : hs) best = std::max(best, dot(h.normal, th));
            if (best < 1e-6) throw std::invalid_argument("unbounded body");
        }
    }

    ConvexBody body = polytope(dim, std::move(verts));
    body.type_ = BodyType::HalfspacePolytope;
    return body;
}

inline ConvexBody ConvexBody::ball(Point center, double radius) {
    if (!(radius > 0.0)) throw std::invalid_argument("ball radius must be positive");
    ConvexBody body;
    body.dim_ = static_cast<int>(center.size());
    body.type_ = BodyType::Ball;
    body.ball_center_ = std::move(center);
    body.ball_radius_ = radius;
    body.finish_setup();
    return body;
}

inline ConvexBody ConvexBody::box(Point lo, Point hi) {
    if (lo.size() != hi.size() || lo.empty()) throw std::invalid_argument("box corners mismatch");
    for (std::size_t i = 0; i < lo.size(); ++i)
        if (!(hi[i] > lo[i])) throw std::invalid_argument("box must have positive extents");
    ConvexBody body;
    body.dim_ = static_cast<int>(lo.size());
    body.type_ = BodyType::Box;
    body.box_lo_ = std::move(lo);
    body.box_hi_ = std::move(hi);
    if (body.dim_ <= 3) {
        if (body.dim_ == 2) {
            // counter-clockwise; polygon consumers rely on the orientation
            body.vertices_ = {{body.box_lo_[0], body.box_lo_[1]},
                              {body.box_hi_[0], body.box_lo_[1]},
                              {body.box_hi_[0], body.box_hi_[1]},
                              {body.box_lo_[0], body.box_hi_[1]}};
        } else {
            std::vector<Point> corners;
            for (int mask = 0; mask < (1 << body.dim_); ++mask) {
                Point c(body.dim_);
                for (int i = 0; i < body.dim_; ++i)
                    c[i] = (mask >> i) & 1 ? body.box_hi_[i] : body.box_lo_[i];
                corners.push_back(std::move(c));
            }
            body.vertices_ = std::move(corners);
        }
        for (int i = 0; i < body.dim_; ++i) {
            Point n(body.dim_, 0.0);
            n[i] = 1.0;
            body.halfspaces_.emplace_back(n, body.box_hi_[i]);
            n[i] = -1.0;
            body.halfspaces_.emplace_back(n, -body.box_lo_[i]);
        }
    }
    body.finish_setup();
    return body;
}

inline bool ConvexBody::contains(const Point& x, double tol) const {
    switch (type_) {
        case BodyType::Ball:
            return norm(subtracted(x, ball_center_)) <= ball_radius_ + tol;
        case BodyType::Box:
            for (int i = 0; i < dim_; ++i)
                if (x[i] < box_lo_[i] - tol || x[i] > box_hi_[i] + tol) return false;
            return true;
        default:
            for (const auto& h : halfspaces_)
                if (dot(h.normal, x) > h.offset + tol) return false;
            return true;
    }
}

// ---------------------------------------------------------------------------
// Functionals
// ---------------------------------------------------------------------------

/// Minkowski functional inf{t > 0 : x in tK}.  Total into [0, +inf]; finite
/// positive for x != o whenever o lies in the interior of K.
inline double minkowski_functional(const ConvexBody& K, const Point& x) {
    if (norm(x) == 0.0) return K.contains(Point(x.size(), 0.0), 1e-12 * K.diameter()) ? 0.0 : kInf;
    if (K.type() == BodyType::Ball) {
        const Point& c = K.ball_center();
        double R = K.ball_radius();
        double A = dot(c, c) - R * R;
        double B = dot(x, c);
        double C = dot(x, x);
        if (std::fabs(A) < 1e-14 * R * R) {
            // origin on the boundary
            return B > 0.0 ? C / (2.0 * B) : kInf;
        }
        double D = B * B - A * C;
        if (A < 0.0) return (B - std::sqrt(D)) / A;  // origin interior
        if (D < 0.0 || B <= 0.0) return kInf;
        return (B - std::sqrt(D)) / A;
    }
    // halfspace form: x in tK iff <a_i, x> <= t b_i for all i
    double lower = 0.0, upper = kInf;
    for (const auto& h : K.halfspaces()) {
        double num = dot(h.normal, x);
        double b = h.offset;
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

/// Support function h_K(u) = max_{y in K} <y, u>  (u need not be unit).
inline double support_function(const ConvexBody& K, const Point& u) {
    switch (K.type()) {
        case BodyType::Ball:
            return dot(K.ball_center(), u) + K.ball_radius() * norm(u);
        case BodyType::Box: {
            double s = 0.0;
            for (int i = 0; i < K.dimension(); ++i)
                s += std::max(K.box_lo()[i] * u[i], K.box_hi()[i] * u[i]);
            return s;
        }
        default: {
            double s = -kInf;
            for (const auto& v : K.vertices()) s = std::max(s, dot(v, u));
            return s;
        }
    }
}

inline double unit_ball_volume(int n) {
    return std::exp(0.5 * n * std::log(M_PI) - std::lgamma(0.5 * n + 1.0));
}

/// Exact Lebesgue measure; closed forms for balls/boxes, triangulation of the
/// hull otherwise (dimension <= 3).
inline double volume(const ConvexBody& K) {
    switch (K.type()) {
        case BodyType::Ball:
            return unit_ball_volume(K.dimension()) *
                   std::pow(K.ball_radius(), K.dimension());
        case BodyType::Box: {
            double v = 1.0;
            for (int i = 0; i < K.dimension(); ++i) v *= K.box_hi()[i] - K.box_lo()[i];
            return v;
        }
        default: {
            const int n = K.dimension();
            if (n == 1) return K.vertices()[1][0] - K.vertices()[0][0];
            if (n == 2) {
                detail::Polygon poly;
                for (const auto& v : K.vertices()) poly.push_back({v[0], v[1]});
                return detail::polygon_area(poly);
            }
            return detail::poly3_volume(detail::poly3_from_body_vertices(K.vertices()));
        }
    }
}

struct McEstimate {
    double value;
    double std_error;
};

/// Monte Carlo volume via hit counting against the bounding box; works in
/// any dimension where membership is decidable.
inline McEstimate volume_mc(const ConvexBody& K, std::size_t samples, std::uint64_t seed) {
    auto [lo, hi] = K.bounding_box();
    double box_vol = 1.0;
    for (std::size_t i = 0; i < lo.size(); ++i) box_vol *= hi[i] - lo[i];
    Rng rng(seed);
    std::size_t hits = 0;
    Point y(lo.size());
    for (std::size_t s = 0; s < samples; ++s) {
        for (std::size_t i = 0; i < y.size(); ++i) y[i] = rng.uniform(lo[i], hi[i]);
        if (K.contains(y)) ++hits;
    }
    double p = static_cast<double>(hits) / samples;
    return {box_vol * p, box_vol * std::sqrt(std::max(p * (1.0 - p), 0.0) / samples)};
}

namespace detail {

/// Clip K's polygon against the translate K + x; false when empty.
inline bool intersection_polygon(const ConvexBody& K, const Point& x, Polygon& poly) {
    thread_local Polygon scratch;
    poly.clear();
    for (const auto& v : K.vertices()) poly.push_back({v[0], v[1]});
    for (const auto& h : K.halfspaces()) {
        double b = h.offset + h.normal[0] * x[0] + h.normal[1] * x[1];
        clip_polygon(poly, {h.normal[0], h.normal[1]}, b, scratch);
        if (poly.size() < 3) return false;
    }
    return true;
}

/// Same for 3D; the base polyhedron is cached per body per thread.  The
/// cache key pairs the address with a geometric fingerprint so a recycled
/// allocation cannot alias a stale polyhedron.
inline bool intersection_poly3(const ConvexBody& K, const Point& x, Poly3& work) {
    thread_local Poly3 base;
    thread_local const ConvexBody* cached_body = nullptr;
    thread_local std::size_t cached_nverts = 0;
    thread_local double cached_fingerprint = 0.0;
    double fingerprint = K.diameter() + K.vertices()[0][0] + 3.0 * K.vertices()[0][2];
    if (cached_body != &K || cached_nverts != K.vertices().size() ||
        cached_fingerprint != fingerprint) {
        base = poly3_from_body_vertices(K.vertices());
        cached_body = &K;
        cached_nverts = K.vertices().size();
        cached_fingerprint = fingerprint;
    }
    work = base;
    const double eps = 1e-13 * K.diameter();
    for (const auto& h : K.halfspaces()) {
        double b = h.offset + dot(h.normal, x);
        clip_poly3(work, {h.normal[0], h.normal[1], h.normal[2]}, b, eps);
        if (work.empty()) return false;
    }
    return true;
}

inline double lens_volume(int n, double R, double d) {
    if (d >= 2.0 * R) return 0.0;
    if (d <= 0.0) return unit_ball_volume(n) * std::pow(R, n);
    switch (n) {
        case 1:
            return 2.0 * R - d;
        case 2:
            return 2.0 * R * R * std::acos(d / (2.0 * R)) -
                   0.5 * d * std::sqrt(4.0 * R * R - d * d);
        case 3:
            return M_PI * (4.0 * R + d) * (2.0 * R - d) * (2.0 * R - d) / 12.0;
        default:
            throw std::invalid_argument("exact ball covariogram requires dimension <= 3");
    }
}

}  // namespace detail

/// Covariogram g_K(x) = Vol_n(K intersect (K + x)); exact for dimension <= 3.
/// Even in x and supported on the difference body.
inline double covariogram(const ConvexBody& K, const Point& x) {
    const int n = K.dimension();
    switch (K.type()) {
        case BodyType::Box: {
            double v = 1.0;
            for (int i = 0; i < n; ++i) {
                double overlap = (K.box_hi()[i] - K.box_lo()[i]) - std::fabs(x[i]);
                if (overlap <= 0.0) return 0.0;
                v *= overlap;
            }
            return v;
        }
        case BodyType::Ball:
            return detail::lens_volume(n, K.ball_radius(), norm(x));
        default:
            break;
    }
    if (n > 3) throw std::invalid_argument("exact covariogram requires dimension <= 3");
    if (n == 1) {
        double len = K.vertices()[1][0] - K.vertices()[0][0];
        return std::max(len - std::fabs(x[0]), 0.0);
    }
    const double vol_K = volume(K);
    const double sliver = 1e-14 * vol_K;
    if (n == 2) {
        thread_local detail::Polygon poly;
        if (!detail::intersection_polygon(K, x, poly)) return 0.0;
        double a = detail::polygon_area(poly);
        return a > sliver ? a : 0.0;
    }
    thread_local detail::Poly3 work;
    if (!detail::intersection_poly3(K, x, work)) return 0.0;
    double v = detail::poly3_volume(work);
    return v > sliver ? v : 0.0;
}

/// Whether K and K + x intersect, i.e. x lies in the closed difference body.
/// Nonemptiness of the clipped polytope instead of a volume sign: sliver
/// volumes drown in cancellation noise long before the clipper loses the
/// vertices themselves.
inline bool covariogram_positive(const ConvexBody& K, const Point& x) {
    switch (K.type()) {
        case BodyType::Box: {
            for (int i = 0; i < K.dimension(); ++i)
                if (std::fabs(x[i]) >= K.box_hi()[i] - K.box_lo()[i]) return false;
            return true;
        }
        case BodyType::Ball:
            return norm(x) < 2.0 * K.ball_radius();
        default:
            break;
    }
    const int n = K.dimension();
    if (n == 1) return std::fabs(x[0]) < K.vertices()[1][0] - K.vertices()[0][0];
    if (n == 2) {
        thread_local detail::Polygon poly, scratch;
        poly.clear();
        for (const auto& v : K.vertices()) poly.push_back({v[0], v[1]});
        for (const auto& h : K.halfspaces()) {
            double b = h.offset + h.normal[0] * x[0] + h.normal[1] * x[1];
            detail::clip_polygon(poly, {h.normal[0], h.normal[1]}, b, scratch);
            if (poly.empty()) return false;
        }
        return true;
    }
    detail::Poly3 work = detail::poly3_from_body_vertices(K.vertices());
    const double eps = 1e-13 * K.diameter();
    for (const auto& h : K.halfspaces()) {
        double b = h.offset + dot(h.normal, x);
        detail::clip_poly3(work, {h.normal[0], h.normal[1], h.normal[2]}, b, eps);
        if (work.empty()) return false;
    }
    return true;
}

/// Monte Carlo covariogram for any dimension: Vol(K) * P[y in K + x].
inline McEstimate covariogram_mc(const ConvexBody& K, const Point& x, std::size_t samples,
                                 std::uint64_t seed) {
    auto [lo, hi] = K.bounding_box();
    double box_vol = 1.0;
    for (std::size_t i = 0; i < lo.size(); ++i) box_vol *= hi[i] - lo[i];
    Rng rng(seed);
    std::size_t in_both = 0;
    Point y(lo.size());
    for (std::size_t s = 0; s < samples; ++s) {
        for (std::size_t i = 0; i < y.size(); ++i) y[i] = rng.uniform(lo[i], hi[i]);
        if (K.contains(y) && K.contains(subtracted(y, x))) ++in_both;
    }
    double p = static_cast<double>(in_both) / samples;
    return {box_vol * p, box_vol * std::sqrt(std::max(p * (1.0 - p), 0.0) / samples)};
}

/// Minkowski sum of two convex CCW polygons by the rotating edge merge.
namespace detail {

inline std::size_t bottom_index(const Polygon& p) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < p.size(); ++i) {
        if (p[i][1] < p[best][1] || (p[i][1] == p[best][1] && p[i][0] < p[best][0])) best = i;
    }
    return best;
}

inline Polygon minkowski_sum_2d(const Polygon& P, const Polygon& Q) {
    const std::size_t np = P.size(), nq = Q.size();
    std::size_t i = bottom_index(P), j = bottom_index(Q);
    Polygon out;
    std::size_t di = 0, dj = 0;
    while (di < np || dj < nq) {
        out.push_back({P[i % np][0] + Q[j % nq][0], P[i % np][1] + Q[j % nq][1]});
        const V2& ep0 = P[i % np];
        const V2& ep1 = P[(i + 1) % np];
        const V2& eq0 = Q[j % nq];
        const V2& eq1 = Q[(j + 1) % nq];
        double cr = (ep1[0] - ep0[0]) * (eq1[1] - eq0[1]) - (ep1[1] - ep0[1]) * (eq1[0] - eq0[0]);
        if (di >= np) {
            ++j;
            ++dj;
        } else if (dj >= nq) {
            ++i;
            ++di;
        } else if (cr > 0.0) {
            ++i;
            ++di;
        } else if (cr < 0.0) {
            ++j;
            ++dj;
        } else {
            ++i;
            ++di;
            ++j;
            ++dj;
        }
    }
    return convex_hull_2d(std::move(out));
}

}  // namespace detail

/// Difference body DK = K + (-K).  Exact for polytopes (2D edge merge, 3D
/// hull of pairwise vertex differences), boxes and balls.
inline ConvexBody difference_body(const ConvexBody& K) {
    switch (K.type()) {
        case BodyType::Ball: {
            Point o(K.dimension(), 0.0);
            return ConvexBody::ball(o, 2.0 * K.ball_radius());
        }
        case BodyType::Box: {
            Point lo = subtracted(K.box_lo(), K.box_hi());
            Point hi = subtracted(K.box_hi(), K.box_lo());
            return ConvexBody::box(lo, hi);
        }
        default:
            break;
    }
    const int n = K.dimension();
    if (n == 1) {
        double len = K.vertices()[1][0] - K.vertices()[0][0];
        return ConvexBody::polytope(1, {{-len}, {len}});
    }
    if (n == 2) {
        detail::Polygon P, Qneg;
        for (const auto& v : K.vertices()) {
            P.push_back({v[0], v[1]});
            Qneg.push_back({-v[0], -v[1]});
        }
        Qneg = detail::convex_hull_2d(std::move(Qneg));
        detail::Polygon sum = detail::minkowski_sum_2d(P, Qneg);
        std::vector<Point> verts;
        for (const auto& p : sum) verts.push_back({p[0], p[1]});
        return ConvexBody::polytope(2, std::move(verts));
    }
    std::vector<Point> diffs;
    for (const auto& a : K.vertices())
        for (const auto& b : K.vertices()) diffs.push_back(subtracted(a, b));
    return ConvexBody::polytope(3, std::move(diffs));
}

inline double difference_body_gauge(const ConvexBody& K, const Point& x) {
    return minkowski_functional(difference_body(K), x);
}

/// Gauge of DK by bisection on the monotone predicate g_K(rx) > 0; the
/// route used when no polytopal description of DK is wanted.
inline double difference_body_gauge_bisect(const ConvexBody& K, const Point& x,
                                           int iterations = 60) {
    double r = norm(x);
    if (r == 0.0) return 0.0;
    // bracket the support endpoint of g_K along the ray
    double hi = 2.0 * K.diameter() / r + 1.0;
    if (covariogram_positive(K, scaled(x, hi))) return 0.0;  // cannot happen for bounded K
    double lo = 0.0;
    for (int i = 0; i < iterations; ++i) {
        double mid = 0.5 * (lo + hi);
        if (covariogram_positive(K, scaled(x, mid)))
            lo = mid;
        else
            hi = mid;
    }
    double tau = 0.5 * (lo + hi);
    return 1.0 / tau;
}

/// (n-1)-volume of the orthogonal projection of K onto theta-perp.
inline double projection_volume(const ConvexBody& K, const Point& theta) {
    const int n = K.dimension();
    if (std::fabs(norm(theta) - 1.0) > 1e-9)
        throw std::invalid_argument("projection direction must be unit");
    if (n == 1) return 1.0;  // 0-dimensional volume of a point
    if (K.type() == BodyType::Ball)
        return unit_ball_volume(n - 1) * std::pow(K.ball_radius(), n - 1);
    if (n == 2) {
        Point perp = {-theta[1], theta[0]};
        return support_function(K, perp) + support_function(K, scaled(perp, -1.0));
    }
    // project vertices into an orthonormal basis of theta-perp, take hull area
    Point a = {1.0, 0.0, 0.0};
    if (std::fabs(theta[0]) > 0.9) a = {0.0, 1.0, 0.0};
    Point u = {theta[1] * a[2] - theta[2] * a[1], theta[2] * a[0] - theta[0] * a[2],
               theta[0] * a[1] - theta[1] * a[0]};
    double lu = norm(u);
    u = scaled(u, 1.0 / lu);
    Point w = {theta[1] * u[2] - theta[2] * u[1], theta[2] * u[0] - theta[0] * u[2],
               theta[0] * u[1] - theta[1] * u[0]};
    detail::Polygon proj;
    for (const auto& v : K.vertices()) proj.push_back({dot(v, u), dot(v, w)});
    detail::Polygon hull = detail::convex_hull_2d(std::move(proj));
    if (hull.size() < 3) return 0.0;
    return detail::polygon_area(hull);
}

/// Gauge of the polar projection body: |x| * Vol_{n-1}(P_{(x/|x|)-perp} K).
inline double polar_projection_gauge(const ConvexBody& K, const Point& x) {
    double r = norm(x);
    if (r == 0.0) return 0.0;
    return r * projection_volume(K, scaled(x, 1.0 / r));
}

/// Uniform sample from K by rejection from the bounding box.
inline Point sample_point(const ConvexBody& K, Rng& rng, std::size_t max_attempts = 1000000) {
    auto [lo, hi] = K.bounding_box();
    Point y(lo.size());
    for (std::size_t attempt = 0; attempt < max_attempts; ++attempt) {
        for (std::size_t i = 0; i < y.size(); ++i) y[i] = rng.uniform(lo[i], hi[i]);
        if (K.contains(y)) return y;
    }
    throw std::runtime_error("degenerate body: rejection sampling failed");
}

// ---------------------------------------------------------------------------
// Direction grids
// ---------------------------------------------------------------------------

enum class GridScheme { UniformAngle, FibonacciSphere, SeededRandom };

/// Deterministic set of unit directions; the discretization of the sphere
/// used by all batch evaluators.
struct DirectionGrid {
    int dimension;
    GridScheme scheme;
    std::uint64_t seed;
    std::vector<Point> directions;
};

inline DirectionGrid make_direction_grid(int dim, std::size_t count,
                                         std::optional<GridScheme> scheme = std::nullopt,
                                         std::uint64_t seed = 0) {
    GridScheme s = scheme.value_or(dim == 2   ? GridScheme::UniformAngle
                                   : dim == 3 ? GridScheme::FibonacciSphere
                                              : GridScheme::SeededRandom);
    DirectionGrid grid{dim, s, seed, {}};
    grid.directions.reserve(count);
    switch (s) {
        case GridScheme::UniformAngle: {
            if (dim != 2) throw std::invalid_argument("uniform-angle grid requires dimension 2");
            for (std::size_t k = 0; k < count; ++k) {
                double a = 2.0 * M_PI * k / count;
                grid.directions.push_back({std::cos(a), std::sin(a)});
            }
            break;
        }
        case GridScheme::FibonacciSphere: {
            if (dim != 3)
                throw std::invalid_argument("fibonacci-sphere grid requires dimension 3");
            for (std::size_t k = 0; k < count; ++k) {
                double z = 1.0 - 2.0 * (k + 0.5) / count;
                double r = std::sqrt(std::max(0.0, 1.0 - z * z));
                double a = 2.39996322972865332 * static_cast<double>(k);
                grid.directions.push_back({r * std::cos(a), r * std::sin(a), z});
            }
            break;
        }
        case GridScheme::SeededRandom: {
            if (dim == 1) {
                for (std::size_t k = 0; k < count; ++k)
                    grid.directions.push_back({k % 2 == 0 ? 1.0 : -1.0});
                break;
            }
            Rng rng(seed);
            while (grid.directions.size() < count) {
                Point d(dim);
                for (int i = 0; i < dim; ++i) d[i] = rng.gaussian();
                double len = norm(d);
                if (len < 1e-8) continue;
                grid.directions.push_back(scaled(d, 1.0 / len));
            }
            break;
        }
    }
    return grid;
}

}  // namespace radialbodies
