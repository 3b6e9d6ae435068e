#pragma once

#include <cstdio>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "radialbodies/ballbody.hpp"
#include "radialbodies/geometry.hpp"
#include "radialbodies/logconcave.hpp"
#include "radialbodies/parallel.hpp"
#include "radialbodies/radialmean.hpp"
#include "radialbodies/verify.hpp"

namespace radialbodies {

using nlohmann::json;

class SpecError : public std::runtime_error {
public:
    explicit SpecError(const std::string& what) : std::runtime_error(what) {}
};

namespace io_detail {

inline Point point_from_json(const json& j, const char* what) {
    if (!j.is_array() || j.empty()) throw SpecError(std::string(what) + ": expected an array");
    Point p;
    for (const auto& v : j) p.push_back(v.get<double>());
    return p;
}

inline const json& require(const json& j, const char* field) {
    auto it = j.find(field);
    if (it == j.end())
        throw SpecError("missing field \"" + std::string(field) + "\" in " + j.dump());
    return *it;
}

/// Fixed 15-significant-digit formatting; the same bytes for the same
/// doubles on every run.
inline std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.15g", v);
    return buf;
}

}  // namespace io_detail

// ---------------------------------------------------------------------------
// Bodies
// ---------------------------------------------------------------------------

inline ConvexBody body_from_json(const json& j) {
    std::string type = io_detail::require(j, "type").get<std::string>();
    if (type == "polytope") {
        const json& vj = io_detail::require(j, "vertices");
        std::vector<Point> verts;
        for (const auto& v : vj) verts.push_back(io_detail::point_from_json(v, "vertex"));
        if (verts.empty()) throw SpecError("polytope: empty vertex list");
        int dim = static_cast<int>(verts.front().size());
        return ConvexBody::polytope(dim, std::move(verts));
    }
    if (type == "ball") {
        Point c = io_detail::point_from_json(io_detail::require(j, "center"), "center");
        double r = io_detail::require(j, "radius").get<double>();
        return ConvexBody::ball(std::move(c), r);
    }
    if (type == "box") {
        Point lo = io_detail::point_from_json(io_detail::require(j, "min"), "min");
        Point hi = io_detail::point_from_json(io_detail::require(j, "max"), "max");
        return ConvexBody::box(std::move(lo), std::move(hi));
    }
    if (type == "hpolytope") {
        const json& hj = io_detail::require(j, "halfspaces");
        std::vector<HalfSpace> hs;
        for (const auto& h : hj)
            hs.emplace_back(io_detail::point_from_json(io_detail::require(h, "normal"), "normal"),
                            io_detail::require(h, "offset").get<double>());
        if (hs.empty()) throw SpecError("hpolytope: empty halfspace list");
        int dim = static_cast<int>(hs.front().normal.size());
        return ConvexBody::from_halfspaces(dim, std::move(hs));
    }
    throw SpecError("unknown body type \"" + type + "\"");
}

inline json body_to_json(const ConvexBody& K) {
    json j;
    switch (K.type()) {
        case BodyType::Ball:
            j["type"] = "ball";
            j["center"] = K.ball_center();
            j["radius"] = K.ball_radius();
            break;
        case BodyType::Box:
            j["type"] = "box";
            j["min"] = K.box_lo();
            j["max"] = K.box_hi();
            break;
        default:
            j["type"] = "polytope";
            j["vertices"] = K.vertices();
            break;
    }
    return j;
}

// ---------------------------------------------------------------------------
// Log-concave functions
// ---------------------------------------------------------------------------

inline LogConcaveFn function_from_json(const json& j);

namespace io_detail {

inline LogConcaveFn covariogram_from_json(const json& c) {
    std::string kind = require(c, "kind").get<std::string>();
    std::size_t samples = c.value("samples", std::size_t{20000});
    std::uint64_t seed = c.value("seed", std::uint64_t{0});
    if (kind == "classical") return covariogram_function(body_from_json(require(c, "body")));
    if (kind == "weighted") {
        Measure mu{function_from_json(require(c, "density"))};
        return weighted_covariogram_function(body_from_json(require(c, "body")), mu, samples);
    }
    if (kind == "l2")
        return l2_covariogram_function(function_from_json(require(c, "function")), samples);
    if (kind == "l1")
        return l1_covariogram_function(function_from_json(require(c, "function")), samples);
    if (kind == "m-order") {
        int m = require(c, "m").get<int>();
        bool mc = c.value("mode", std::string("exact")) == "monte-carlo";
        return morder_covariogram_function(body_from_json(require(c, "body")), m, mc, samples,
                                           seed);
    }
    if (kind == "l1-m-order") {
        int m = require(c, "m").get<int>();
        return l1_morder_covariogram_function(function_from_json(require(c, "function")), m,
                                              samples);
    }
    throw SpecError("unknown covariogram kind \"" + kind + "\"");
}

}  // namespace io_detail

inline LogConcaveFn function_from_json(const json& j) {
    if (j.contains("covariogram")) return io_detail::covariogram_from_json(j["covariogram"]);
    std::string family = io_detail::require(j, "family").get<std::string>();
    json params = j.value("params", json::object());
    if (family == "gaussian") {
        if (params.contains("covariance")) {
            std::vector<std::vector<double>> cov =
                params["covariance"].get<std::vector<std::vector<double>>>();
            return make_gaussian(std::move(cov));
        }
        int n = io_detail::require(params, "dimension").get<int>();
        double var = params.value("variance", 1.0);
        return make_gaussian_isotropic(n, var);
    }
    if (family == "exp-norm") {
        int n = io_detail::require(params, "dimension").get<int>();
        return make_exp_norm(n, params.value("c", 1.0));
    }
    if (family == "indicator")
        return make_indicator(body_from_json(io_detail::require(params, "body")));
    if (family == "quadratic-exponential") {
        std::vector<std::vector<double>> A =
            io_detail::require(params, "matrix").get<std::vector<std::vector<double>>>();
        return make_quadratic_exponential(std::move(A));
    }
    if (family == "product") {
        std::vector<LogConcaveFn> factors;
        for (const auto& f : io_detail::require(params, "factors"))
            factors.push_back(function_from_json(f));
        return make_product(std::move(factors));
    }
    if (family == "restriction") {
        return make_restriction(function_from_json(io_detail::require(params, "inner")),
                                body_from_json(io_detail::require(params, "body")));
    }
    throw SpecError("unknown function family \"" + family + "\"");
}

// ---------------------------------------------------------------------------
// Quadrature spec
// ---------------------------------------------------------------------------

inline QuadratureSpec quadspec_from_json(const json& j) {
    QuadratureSpec spec;
    if (j.contains("eta") && !j["eta"].is_string())  // "auto" keeps the default
        spec.eta = j["eta"].get<double>();
    spec.jacobi_nodes = j.value("jacobi_nodes", spec.jacobi_nodes);
    spec.legendre_tol = j.value("legendre_tol", spec.legendre_tol);
    spec.truncation_tol = j.value("truncation_tol", spec.truncation_tol);
    return spec;
}

// ---------------------------------------------------------------------------
// CSV and summaries
// ---------------------------------------------------------------------------

/// Radial samples, one row per direction: index,theta_1..theta_n,value.
inline void write_radial_csv(std::ostream& os, const DirectionGrid& grid,
                             const std::vector<double>& values) {
    os << "index";
    for (int i = 1; i <= grid.dimension; ++i) os << ",theta_" << i;
    os << ",value\n";
    for (std::size_t i = 0; i < grid.directions.size(); ++i) {
        os << i;
        for (double c : grid.directions[i]) os << "," << io_detail::num(c);
        os << "," << io_detail::num(values[i]) << "\n";
    }
}

inline json radial_summary_json(json source, double p, const DirectionGrid& grid,
                                const std::vector<double>& radial_values) {
    double lo = kInf, hi = -kInf;
    for (double r : radial_values) {
        lo = std::min(lo, r);
        hi = std::max(hi, r);
    }
    json j;
    j["body"] = std::move(source);
    j["p"] = p;
    j["grid"] = {{"dimension", grid.dimension}, {"count", grid.directions.size()},
                 {"seed", grid.seed}};
    j["min_radius"] = lo;
    j["max_radius"] = hi;
    return j;
}

inline json report_to_json(const VerificationReport& rep) {
    json j;
    j["check"] = rep.check;
    j["instance"] = rep.instance;
    j["pass"] = rep.pass;
    j["worst_violation"] = rep.worst_violation;
    j["tolerance"] = rep.tolerance;
    j["seed"] = rep.seed;
    j["runtime_seconds"] = rep.runtime_seconds;
    j["witnesses"] = json::array();
    for (const auto& w : rep.witnesses)
        j["witnesses"].push_back({{"input", w.input}, {"lhs", w.lhs}, {"rhs", w.rhs}});
    return j;
}

// ---------------------------------------------------------------------------
// Verification suite configs
// ---------------------------------------------------------------------------

/// One suite entry: {"check": name, ...instance fields..., "tolerance": t,
/// "seed": s}.  Gauges are described as a log-concave function plus p.
inline VerificationReport run_suite_entry(const json& e) {
    std::string check = io_detail::require(e, "check").get<std::string>();
    QuadratureSpec spec = e.contains("quadrature") ? quadspec_from_json(e["quadrature"])
                                                   : QuadratureSpec{};
    std::uint64_t seed = e.value("seed", std::uint64_t{0});
    std::string instance = e.value("instance", std::string());

    auto gauge_from_entry = [&](const json& cfg) {
        LogConcaveFn g = function_from_json(io_detail::require(cfg, "function"));
        double p = io_detail::require(cfg, "p").get<double>();
        StarGauge sg;
        sg.dimension = g.dimension;
        sg.evaluator = [g, p, spec](const Point& x) { return ball_gauge(g, p, x, spec); };
        return sg;
    };
    auto grid_from_entry = [&](const json& cfg, int dim) {
        std::size_t count = cfg.value("grid", std::size_t{64});
        return make_direction_grid(dim, count, std::nullopt, seed);
    };

    if (check == "subadditivity") {
        StarGauge sg = gauge_from_entry(e);
        std::size_t pairs = e.value("pairs", std::size_t{10000});
        double tol = e.value("tolerance", 1e-5);
        VerificationReport rep = check_subadditivity(sg, pairs, seed, tol, instance);
        rep.seed = seed;
        return rep;
    }
    if (check == "directional_convexity") {
        StarGauge sg = gauge_from_entry(e);
        Point u = io_detail::point_from_json(io_detail::require(e, "u"), "u");
        Point th = io_detail::point_from_json(io_detail::require(e, "theta"), "theta");
        return check_directional_convexity(sg, u, th, e.value("h", 1e-3), instance);
    }
    if (check == "H_inequality") {
        LogConcaveFn g = function_from_json(io_detail::require(e, "function"));
        Point u = io_detail::point_from_json(io_detail::require(e, "u"), "u");
        Point th = io_detail::point_from_json(io_detail::require(e, "theta"), "theta");
        double p = io_detail::require(e, "p").get<double>();
        return check_H_inequality(g, p, u, th, e.value("h", 5e-3 * norm(u)), spec, instance);
    }
    if (check == "det_inequality") {
        const json& q = io_detail::require(e, "smooth2d");
        Smooth2DFn f = make_smooth_quadratic_exponential(
            q.value("a", 1.0), q.value("b", 1.0), q.value("c", 0.0), q.value("d", 0.0),
            q.value("e", 0.0));
        return check_det_inequality(f, io_detail::require(e, "p").get<double>(), spec,
                                    e.value("tolerance", 1e-6));
    }
    if (check == "prekopa_marginal") {
        const json& q = io_detail::require(e, "smooth2d");
        Smooth2DFn f = make_smooth_quadratic_exponential(
            q.value("a", 1.0), q.value("b", 1.0), q.value("c", 0.0), q.value("d", 0.0),
            q.value("e", 0.0));
        std::vector<double> grid = io_detail::require(e, "a_grid").get<std::vector<double>>();
        return check_prekopa_marginal(f, io_detail::require(e, "p").get<double>(), grid, spec,
                                      e.value("tolerance", 1e-9));
    }
    if (check == "monotonicity") {
        LogConcaveFn g = function_from_json(io_detail::require(e, "function"));
        std::vector<double> ps = io_detail::require(e, "p_list").get<std::vector<double>>();
        return check_monotonicity(g, ps, grid_from_entry(e, g.dimension), spec,
                                  e.value("tolerance", 1e-7), instance);
    }
    if (check == "limits") {
        ConvexBody K = body_from_json(io_detail::require(e, "body"));
        return check_limits(K, grid_from_entry(e, K.dimension()), spec,
                            e.value("tolerance", 0.01), e.value("p_high", 200.0),
                            e.value("p_low", -0.999), nullptr, instance);
    }
    if (check == "mollify_convergence") {
        LogConcaveFn g = function_from_json(io_detail::require(e, "function"));
        std::vector<int> ks = e.value("k_list", std::vector<int>{4, 16, 64, 256});
        std::vector<Point> probes;
        for (const auto& pj : io_detail::require(e, "probes"))
            probes.push_back(io_detail::point_from_json(pj, "probe"));
        return check_mollify_convergence(g, io_detail::require(e, "p").get<double>(), ks, probes,
                                         spec, instance);
    }
    if (check == "ip_properties") {
        LogConcaveFn g = function_from_json(io_detail::require(e, "function"));
        Point dir = io_detail::point_from_json(io_detail::require(e, "direction"), "direction");
        dir = scaled(dir, 1.0 / norm(dir));
        std::vector<double> ps = io_detail::require(e, "p_list").get<std::vector<double>>();
        return check_ip_properties(ray_profile(g, dir), ps, spec,
                                   e.value("escape_bound", 50.0), instance);
    }
    if (check == "boundary_infinity") {
        LogConcaveFn g = function_from_json(io_detail::require(e, "function"));
        std::vector<Point> dirs;
        for (const auto& dj : io_detail::require(e, "directions"))
            dirs.push_back(io_detail::point_from_json(dj, "direction"));
        std::vector<double> ps = e.value("p_list", std::vector<double>{-0.5, 1.0});
        return check_boundary_infinity(g, dirs, ps, spec, instance);
    }
    throw SpecError("unknown check \"" + check + "\"");
}

/// Run a whole suite; entries execute concurrently, reports are merged in a
/// deterministic order (check name, then instance).
inline std::vector<VerificationReport> run_suite(const json& suite) {
    if (!suite.is_array()) throw SpecError("suite config must be a JSON array");
    std::vector<VerificationReport> reports(suite.size());
    parallel_for(suite.size(), [&](std::size_t i) { reports[i] = run_suite_entry(suite[i]); });
    std::stable_sort(reports.begin(), reports.end(),
                     [](const VerificationReport& a, const VerificationReport& b) {
                         return std::tie(a.check, a.instance) < std::tie(b.check, b.instance);
                     });
    return reports;
}

}  // namespace radialbodies
