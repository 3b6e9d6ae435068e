// Acceptance suite: one numbered criterion per run (or all), one PASS/FAIL
// line each, exit 0 iff every requested criterion passes.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#include "radialbodies/io.hpp"

using namespace radialbodies;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

double segment_radius(double p) {
    if (p == 0.0) return std::exp(-1.0);
    return std::pow(1.0 + p, -1.0 / p);
}

double gaussian_radius(double p) {
    return std::pow(p * std::pow(2.0, 0.5 * p - 1.0) * std::tgamma(0.5 * p), 1.0 / p);
}

ConvexBody seeded_polygon(int sides, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<Point> pts;
    for (int i = 0; i < sides; ++i) {
        double a = 2.0 * M_PI * (i + 0.4 * rng.uniform()) / sides;
        pts.push_back({std::cos(a), std::sin(a)});
    }
    ConvexBody hull = ConvexBody::polytope(2, pts);
    Point c(2, 0.0);
    for (const auto& v : hull.vertices()) c = added(c, scaled(v, 1.0 / hull.vertices().size()));
    std::vector<Point> shifted;
    for (const auto& v : hull.vertices()) shifted.push_back(subtracted(v, c));
    return ConvexBody::polytope(2, shifted);
}

ConvexBody unit_square() { return ConvexBody::box({0.0, 0.0}, {1.0, 1.0}); }
ConvexBody right_triangle() { return ConvexBody::polytope(2, {{0, 0}, {1, 0}, {0, 1}}); }

char buf[512];

// 1. Segment closed form: rho_{R_p[0,1]} = (1+p)^{-1/p}, e^{-1} at p = 0.
Outcome criterion_1() {
    auto start = std::chrono::steady_clock::now();
    RadialMeanBody seg(ConvexBody::polytope(1, {{0.0}, {1.0}}));
    double worst = 0.0;
    for (double p : {-0.9, -0.5, -0.1, 0.0, 0.5, 1.0, 2.0, 5.0}) {
        for (double dir : {1.0, -1.0}) {
            double rho = 1.0 / radial_mean_gauge(seg, p, {dir});
            worst = std::max(worst, std::fabs(rho - segment_radius(p)) / segment_radius(p));
        }
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::snprintf(buf, sizeof(buf), "worst rel dev %.3g (tol 1e-6), runtime %.2fs (limit 1s)",
                  worst, secs);
    return {worst <= 1e-6 && secs < 1.0, buf};
}

// 2. Indicator fixed point: K_p(chi_K) = K on a seeded polygon.
Outcome criterion_2() {
    ConvexBody K = seeded_polygon(7, 2024);
    LogConcaveFn g = make_indicator(K);
    DirectionGrid grid = make_direction_grid(2, 64);
    double worst = 0.0;
    for (double p : {-0.5, 0.0, 1.0}) {
        for (const auto& th : grid.directions) {
            double exact = minkowski_functional(K, th);
            worst = std::max(worst, std::fabs(ball_gauge(g, p, th) - exact) / exact);
        }
    }
    std::snprintf(buf, sizeof(buf), "worst rel dev %.3g (tol 1e-8) on 64 directions", worst);
    return {worst <= 1e-8, buf};
}

// 3. Gaussian radii (p 2^{p/2-1} Gamma(p/2))^{1/p} for p in {-1/2, 1, 2}.
Outcome criterion_3() {
    LogConcaveFn g = make_gaussian_isotropic(2, 1.0);
    DirectionGrid grid = make_direction_grid(2, 8);
    double worst = 0.0;
    for (double p : {-0.5, 1.0, 2.0}) {
        double radius = gaussian_radius(p);
        for (const auto& th : grid.directions)
            worst = std::max(worst, std::fabs(ball_gauge(g, p, th) * radius - 1.0));
    }
    bool sqrt2 = std::fabs(gaussian_radius(2.0) - std::sqrt(2.0)) < 1e-12;
    std::snprintf(buf, sizeof(buf), "worst rel dev %.3g (tol 1e-6); radius(p=2)=sqrt(2): %s",
                  worst, sqrt2 ? "yes" : "no");
    return {worst <= 1e-6 && sqrt2, buf};
}

// 4. Convexity at negative p: subadditivity of R_p K over 1e4 seeded pairs
//    for five bodies and p in {-3/4, -1/2, -1/4}.
Outcome criterion_4() {
    auto start = std::chrono::steady_clock::now();
    struct Item {
        const char* name;
        ConvexBody body;
    };
    std::vector<Item> bodies;
    bodies.push_back({"square", unit_square()});
    bodies.push_back({"triangle", right_triangle()});
    bodies.push_back({"hexagon", seeded_polygon(6, 77)});
    bodies.push_back({"cube", ConvexBody::box({0, 0, 0}, {1, 1, 1})});
    bodies.push_back(
        {"simplex", ConvexBody::polytope(3, {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}})});
    QuadratureSpec spec;
    spec.legendre_tol = 1e-8;
    spec.jacobi_nodes = 32;
    double worst = -kInf;
    const char* worst_name = "";
    std::uint64_t seed = 40;
    for (const auto& item : bodies) {
        RadialMeanBody body(item.body);
        for (double p : {-0.75, -0.5, -0.25}) {
            StarGauge sg;
            sg.dimension = item.body.dimension();
            const LogConcaveFn& g = body.covariogram;
            sg.evaluator = [&g, p, &spec](const Point& x) { return ball_gauge(g, p, x, spec); };
            VerificationReport rep = check_subadditivity(sg, 10000, ++seed, 1e-5);
            if (rep.worst_violation > worst) {
                worst = rep.worst_violation;
                worst_name = item.name;
            }
        }
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::snprintf(buf, sizeof(buf),
                  "worst rel violation %.3g (tol 1e-5, at %s), runtime %.0fs (limit 120s)",
                  worst, worst_name, secs);
    return {worst <= 1e-5 && secs < 120.0, buf};
}

// 5. Hessian-determinant inequality on seeded quadratic-exponential
//    profiles, with the analytic gaussian instance at -pi/2.
Outcome criterion_5() {
    Rng rng(55);
    double worst = -kInf;
    int instances = 0;
    while (instances < 20) {
        double a = rng.uniform(0.3, 2.0), b = rng.uniform(0.3, 2.0);
        double c = rng.uniform(-0.95, 0.95) * 2.0 * std::sqrt(a * b);
        double d = rng.uniform() < 0.3 ? rng.uniform(0.0, 0.5) : 0.0;
        double e = rng.uniform() < 0.3 ? rng.uniform(0.0, 0.5) : 0.0;
        Smooth2DFn f = make_smooth_quadratic_exponential(a, b, c, d, e);
        for (double p : {-0.5, 0.5, 1.0, 2.0}) {
            VerificationReport rep = check_det_inequality(f, p, {}, 1e-6);
            worst = std::max(worst, rep.worst_violation);
        }
        ++instances;
    }
    DetInequalityValues v = det_inequality_values(make_smooth_quadratic_exponential(1, 1, 0), 1.0);
    double analytic_dev = std::fabs(v.det + M_PI / 2.0);
    std::snprintf(buf, sizeof(buf),
                  "worst normalized det %.3g (tol 1e-6); |det +pi/2| = %.3g (tol 1e-6)", worst,
                  analytic_dev);
    return {worst <= 1e-6 && analytic_dev <= 1e-6, buf};
}

// 6. Fubini equivalence: direct translate average (N = 1e6) vs covariogram
//    quadrature within 3 standard errors on 32 seeded instances.
Outcome criterion_6() {
    Rng rng(66);
    std::vector<RadialMeanBody> bodies;
    bodies.emplace_back(unit_square());
    bodies.emplace_back(right_triangle());
    bodies.emplace_back(seeded_polygon(5, 9));
    double worst_sigma = 0.0;
    int done = 0;
    for (int i = 0; done < 32; ++i) {
        const RadialMeanBody& K = bodies[i % bodies.size()];
        double p = rng.uniform(-0.5, 2.5);
        if (std::fabs(p) < 2e-3) continue;
        Point x = {rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5)};
        if (norm(x) < 0.3) continue;
        double quad = radial_mean_gauge(K, p, x);
        McEstimate est = radial_mean_direct_mc(K.body, p, x, 1000000, 600 + i);
        double sigmas = std::fabs(est.value - quad) / est.std_error;
        worst_sigma = std::max(worst_sigma, sigmas);
        ++done;
    }
    std::snprintf(buf, sizeof(buf), "worst |MC - quadrature| = %.2f standard errors (tol 3)",
                  worst_sigma);
    return {worst_sigma <= 3.0, buf};
}

// 7. Endpoint limits at 1 percent on 64 directions: R_200 K against DK, and
//    the dilated p = -0.999 body against Vol(K) times the polar projection
//    body.  The DK half cannot meet 1 percent at p = 200: the radial ratio
//    is pinned at (Gamma(p+1)Gamma(k+1)/Gamma(p+k+1))^{1/p} ~ 1 - k ln p / p
//    for contact order k, i.e. 2.6...4.9 percent here; reported honestly.
Outcome criterion_7() {
    double worst_dk = 0.0, worst_polar = 0.0;
    DirectionGrid grid = make_direction_grid(2, 64);
    for (const ConvexBody& K : {unit_square(), right_triangle()}) {
        LimitCheckDetail det;
        check_limits(K, grid, {}, 0.01, 200.0, -0.999, &det);
        worst_dk = std::max(worst_dk, det.dk_max_deviation);
        worst_polar = std::max(worst_polar, det.polar_max_deviation);
    }
    bool pass = worst_dk <= 0.01 && worst_polar <= 0.01;
    std::snprintf(buf, sizeof(buf),
                  "DK half: %.4f (tol 0.01, analytic floor %.4f); polar half: %.5f (tol 0.01)",
                  worst_dk, 1.0 - std::pow(201.0, -1.0 / 200.0), worst_polar);
    return {pass, buf};
}

// 8. Monotonicity on a 9-point p-grid and continuity across the p = 0
//    branch seam.
Outcome criterion_8() {
    std::vector<double> pgrid = {-0.9, -0.75, -0.5, -0.25, 0.0, 0.5, 1.0, 2.0, 5.0};
    std::vector<LogConcaveFn> gs = {covariogram_function(unit_square()),
                                    make_gaussian_isotropic(2, 1.0),
                                    make_indicator(seeded_polygon(6, 5))};
    double worst_mono = -kInf;
    for (const auto& g : gs) {
        VerificationReport rep =
            check_monotonicity(g, pgrid, make_direction_grid(2, 64), {}, 1e-7);
        worst_mono = std::max(worst_mono, rep.worst_violation);
    }
    double worst_seam = 0.0;
    DirectionGrid probe = make_direction_grid(2, 16);
    for (const auto& g : {covariogram_function(right_triangle()), make_gaussian_isotropic(2, 1.0)}) {
        for (const auto& th : probe.directions) {
            double zero = ball_gauge(g, 0.0, th);
            for (double h : {1e-3, -1e-3}) {
                double v = ball_gauge(g, PIndex{h, h > 0 ? PIndex::Branch::Positive
                                                         : PIndex::Branch::Negative},
                                      th);
                worst_seam = std::max(worst_seam, std::fabs(v - zero) / zero);
            }
        }
    }
    std::snprintf(buf, sizeof(buf),
                  "worst monotonicity violation %.3g (tol 1e-7); branch seam %.3g (tol 5e-3)",
                  worst_mono, worst_seam);
    return {worst_mono <= 1e-7 && worst_seam <= 5e-3, buf};
}

// 9. Mollification convergence with the gaussian closed form pinned.
Outcome criterion_9() {
    bool all_pass = true;
    double worst = -kInf;
    struct Item {
        LogConcaveFn g;
        std::vector<Point> probes;
    };
    std::vector<Item> items;
    items.push_back({make_gaussian_isotropic(1, 1.0), {{0.7}, {-1.3}}});
    items.push_back({covariogram_function(unit_square()), {{0.9, 0.3}, {-0.5, 0.5}}});
    items.push_back({make_indicator(ConvexBody::polytope(1, {{-1.0}, {1.0}})), {{1.0}, {-0.6}}});
    for (const auto& item : items) {
        for (double p : {-0.5, 1.0}) {
            VerificationReport rep =
                check_mollify_convergence(item.g, p, {4, 16, 64, 256}, item.probes);
            all_pass = all_pass && rep.pass;
            worst = std::max(worst, rep.worst_violation);
        }
    }
    LogConcaveFn g256 = mollify(make_gaussian_isotropic(1, 1.0), 256);
    double expected = 1.0 / (std::sqrt(1.0 + 2.0 / 256.0) * std::sqrt(M_PI / 2.0));
    double closed_dev = std::fabs(ball_gauge(g256, 1.0, {1.0}) - expected) / expected;
    std::snprintf(buf, sizeof(buf),
                  "e_256 < e_4 at all probes: %s (worst margin %.3g); gaussian closed form dev "
                  "%.2g (tol 1e-4)",
                  all_pass ? "yes" : "no", worst, closed_dev);
    return {all_pass && closed_dev <= 1e-4, buf};
}

// 10. The H-ratio inequality on 100 seeded instances plus collinear
//     equality cases within the stencil budget.
Outcome criterion_10() {
    std::vector<LogConcaveFn> gs = {make_gaussian_isotropic(2, 1.0),
                                    make_quadratic_exponential({{1.0, 0.4}, {0.4, 1.2}}),
                                    covariogram_function(unit_square()),
                                    covariogram_function(right_triangle())};
    Rng rng(101);
    int done = 0, failed = 0;
    double worst_margin = -kInf;
    while (done < 100) {
        const LogConcaveFn& g = gs[done % gs.size()];
        double p = rng.uniform(-0.75, 2.5);
        if (std::fabs(p) < 5e-3) continue;
        Point u = {rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5)};
        Point th = {rng.gaussian(), rng.gaussian()};
        if (norm(u) < 0.4 || norm(th) < 0.3) continue;
        th = scaled(th, 1.0 / norm(th));
        VerificationReport rep = check_H_inequality(g, p, u, th, 5e-3 * norm(u));
        if (!rep.pass) ++failed;
        worst_margin = std::max(worst_margin, rep.worst_violation - rep.tolerance);
        ++done;
    }
    int collinear_failed = 0;
    for (int i = 0; i < 10; ++i) {
        const LogConcaveFn& g = gs[i % gs.size()];
        double p = (i % 2 == 0) ? 1.5 : -0.5;
        Point u = {0.6 + 0.1 * i, 0.4};
        Point th = scaled(u, 1.0 / norm(u));
        VerificationReport rep = check_H_inequality(g, p, u, th, 5e-3 * norm(u));
        if (std::fabs(rep.witnesses[0].lhs - rep.witnesses[0].rhs) > rep.tolerance)
            ++collinear_failed;
    }
    std::snprintf(buf, sizeof(buf),
                  "%d/100 random instances failed; %d/10 collinear equality cases out of budget",
                  failed, collinear_failed);
    return {failed == 0 && collinear_failed == 0, buf};
}

// 11. I_p: monotone in p on both sign regimes, constant for indicator
//     profiles, and I_200 of chi_{[0,R]} within 1 percent of R.
Outcome criterion_11() {
    RayProfile box;
    box.direction = {1.0};
    box.psi = [](double r) { return r <= 0.7 ? 1.0 : 0.0; };
    box.psi0 = 1.0;
    box.support_end = 0.7;
    RayProfile tent;
    tent.direction = {1.0};
    tent.psi = [](double r) { return std::max(1.0 - r, 0.0); };
    tent.psi0 = 1.0;
    tent.support_end = 1.0;
    RayProfile expo;
    expo.direction = {1.0};
    expo.psi = [](double r) { return std::exp(-r); };
    expo.psi0 = 1.0;
    expo.support_end = kInf;

    std::vector<double> ps = {-0.9, -0.5, -0.25, 0.5, 1.0, 2.0, 5.0};
    bool mono = true;
    for (const RayProfile* prof : {&tent, &expo}) {
        double prev = 0.0;
        for (double p : ps) {
            double v = i_p(*prof, p);
            if (v < prev * (1.0 - 1e-9)) mono = false;
            prev = v;
        }
    }
    double const_dev = 0.0;
    for (double p : ps) const_dev = std::max(const_dev, std::fabs(i_p(box, p) - 0.7));
    double i200_dev = std::fabs(i_p(box, 200.0) - 0.7) / 0.7;
    std::snprintf(buf, sizeof(buf),
                  "monotone: %s; indicator constancy dev %.2g; |I_200 - R|/R = %.2g (tol 0.01)",
                  mono ? "yes" : "no", const_dev, i200_dev);
    return {mono && const_dev <= 1e-9 && i200_dev <= 0.01, buf};
}

const char* kDescriptions[] = {
    "segment closed form (1+p)^{-1/p}",
    "indicator fixed point K_p(chi_K) = K",
    "gaussian ball radii",
    "subadditivity of R_p K at negative p",
    "Hessian determinant inequality",
    "Fubini equivalence (translate average vs covariogram)",
    "endpoint limits (DK at p=200, scaled polar projection at p=-0.999)",
    "monotonicity in p and zero-branch continuity",
    "mollification convergence",
    "H-ratio inequality",
    "I_p monotonicity, constancy and endpoint limit",
};

Outcome run_criterion(int id) {
    switch (id) {
        case 1: return criterion_1();
        case 2: return criterion_2();
        case 3: return criterion_3();
        case 4: return criterion_4();
        case 5: return criterion_5();
        case 6: return criterion_6();
        case 7: return criterion_7();
        case 8: return criterion_8();
        case 9: return criterion_9();
        case 10: return criterion_10();
        case 11: return criterion_11();
        default: return {false, "unknown criterion"};
    }
}

}  // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int i = 1; i + 1 < argc; ++i)
        if (std::strcmp(argv[i], "--criterion") == 0) only = std::atoi(argv[i + 1]);
    bool all_pass = true;
    for (int id = 1; id <= 11; ++id) {
        if (only != 0 && id != only) continue;
        Outcome out = run_criterion(id);
        std::printf("criterion %2d: %s - %s [%s]\n", id, out.pass ? "PASS" : "FAIL",
                    kDescriptions[id - 1], out.detail.c_str());
        std::fflush(stdout);
        all_pass = all_pass && out.pass;
    }
    return all_pass ? 0 : 1;
}
