#include "radialbodies/logconcave.hpp"

#include "radialbodies/ballbody.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace radialbodies;

namespace {

ConvexBody centered_square() { return ConvexBody::box({-1.0, -1.0}, {1.0, 1.0}); }

}  // namespace

TEST(Families, GaussianAtOrigin) {
    LogConcaveFn g = make_gaussian_isotropic(2, 1.0);
    EXPECT_DOUBLE_EQ(g.eval({0.0, 0.0}), 1.0);
    EXPECT_NEAR(g.eval({1.0, 0.0}), std::exp(-0.5), 1e-15);
    EXPECT_TRUE(g.origin_interior);
    EXPECT_TRUE(g.full_support);
}

TEST(Families, IndicatorValues) {
    LogConcaveFn g = make_indicator(centered_square());
    EXPECT_DOUBLE_EQ(g.eval({0.5, 0.5}), 1.0);
    EXPECT_DOUBLE_EQ(g.eval({1.5, 0.0}), 0.0);
    EXPECT_TRUE(g.origin_interior);
    EXPECT_TRUE(g.support_exact);
}

TEST(Families, IndicatorBoundaryOrigin) {
    // origin is a vertex: legal, but flagged as non-interior
    LogConcaveFn g = make_indicator(ConvexBody::box({0.0, 0.0}, {1.0, 1.0}));
    EXPECT_FALSE(g.origin_interior);
    ConvexBody off = ConvexBody::box({1.0, 1.0}, {2.0, 2.0});
    EXPECT_THROW(make_indicator(off), std::invalid_argument);
}

TEST(Families, QuadraticExponential) {
    // Q(r, s) = r^2 + s^2 + rs
    LogConcaveFn g = make_quadratic_exponential({{1.0, 0.5}, {0.5, 1.0}});
    EXPECT_NEAR(g.eval({1.0, 0.0}), std::exp(-1.0), 1e-15);
    EXPECT_NEAR(g.eval({1.0, 1.0}), std::exp(-3.0), 1e-15);
    EXPECT_THROW(make_quadratic_exponential({{1.0, 0.0}, {0.0, -1.0}}),
                 std::invalid_argument);
}

TEST(Families, ProductAndRestriction) {
    LogConcaveFn gauss = make_gaussian_isotropic(1, 1.0);
    ConvexBody seg = ConvexBody::polytope(1, {{-1.0}, {40.0}});
    LogConcaveFn restricted = make_restriction(make_exp_norm(1, 1.0), seg);
    EXPECT_DOUBLE_EQ(restricted.eval({-2.0}), 0.0);
    EXPECT_NEAR(restricted.eval({2.0}), std::exp(-2.0), 1e-15);
    LogConcaveFn prod = make_product({gauss, make_exp_norm(1, 0.5)});
    EXPECT_NEAR(prod.eval({1.0}), std::exp(-0.5) * std::exp(-0.5), 1e-15);
    EXPECT_TRUE(prod.full_support);
}

TEST(Families, TripleTestInvariant) {
    std::vector<LogConcaveFn> shipped = {
        make_gaussian_isotropic(2, 1.0),
        make_exp_norm(2, 1.5),
        make_indicator(centered_square()),
        make_quadratic_exponential({{1.0, 0.5}, {0.5, 1.0}}),
        covariogram_function(ConvexBody::polytope(2, {{0, 0}, {1, 0}, {0, 1}})),
    };
    for (const auto& g : shipped) {
        TripleTestReport rep = validate_logconcave(g, 1000, 5);
        EXPECT_LE(rep.worst_violation, 1e-9);
        EXPECT_LE(rep.worst_max_excess, 0.0);
        EXPECT_EQ(rep.tested, 1000u);
    }
}

TEST(RayProfiles, GaussianRay) {
    LogConcaveFn g = make_gaussian_isotropic(2, 1.0);
    RayProfile prof = ray_profile(g, {1.0, 0.0});
    EXPECT_NEAR(prof.psi(1.0), std::exp(-0.5), 1e-12);
    EXPECT_NEAR(prof.psi(1.0), 0.606531, 1e-6);
    EXPECT_TRUE(std::isinf(prof.support_end));
}

TEST(RayProfiles, IndicatorEndpoints) {
    LogConcaveFn g = make_indicator(centered_square());
    RayProfile axis = ray_profile(g, {1.0, 0.0});
    EXPECT_NEAR(axis.support_end, 1.0, 1e-10);
    double s = 1.0 / std::sqrt(2.0);
    RayProfile diag = ray_profile(g, {s, s});
    EXPECT_NEAR(diag.support_end, std::sqrt(2.0), 1e-10);
}

TEST(RayProfiles, BisectionMatchesExactSupportGauge) {
    // support_end from positivity bisection vs the Minkowski functional of
    // the exact support body
    ConvexBody T = ConvexBody::polytope(2, {{0, 0}, {1, 0}, {0, 1}});
    LogConcaveFn g = covariogram_function(T);
    DirectionGrid grid = make_direction_grid(2, 32);
    for (const auto& th : grid.directions) {
        RayProfile prof = ray_profile(g, th);
        double exact = 1.0 / minkowski_functional(*g.support_hint, th);
        EXPECT_NEAR(prof.support_end, exact, 1e-8 * exact);
    }
}

TEST(RayProfiles, ZeroRayDetected) {
    LogConcaveFn g = make_indicator(ConvexBody::box({0.0, 0.0}, {1.0, 1.0}));
    RayProfile away = ray_profile(g, {-1.0, 0.0});
    EXPECT_DOUBLE_EQ(away.support_end, 0.0);
    RayProfile along = ray_profile(g, {1.0, 0.0});
    EXPECT_NEAR(along.support_end, 1.0, 1e-10);
}

TEST(GeneralizedCovariogram, WeightedUniformReducesToClassical) {
    ConvexBody K = ConvexBody::box({0.0, 0.0}, {1.0, 1.0});
    Measure lebesgue{make_indicator(ConvexBody::box({-10.0, -10.0}, {10.0, 10.0}))};
    LogConcaveFn weighted = weighted_covariogram_function(K, lebesgue);
    EXPECT_NEAR(weighted.eval({0.5, 0.5}), 0.25, 1e-12);
    EXPECT_NEAR(weighted.eval({0.5, 0.5}), covariogram(K, {0.5, 0.5}), 1e-12);
    EXPECT_NEAR(weighted.origin_value, 1.0, 1e-12);
}

TEST(GeneralizedCovariogram, WeightedGaussianDensity) {
    ConvexBody K = ConvexBody::box({0.0, 0.0}, {1.0, 1.0});
    Measure mu{make_gaussian_isotropic(2, 1.0)};
    LogConcaveFn weighted = weighted_covariogram_function(K, mu, 50000);
    // oracle: separable closed form over [x, 1] x [x, 1] for x = (t, t)
    double t = 0.4;
    auto one_dim = [](double a, double b) {
        return std::sqrt(M_PI / 2.0) * (std::erf(b / std::sqrt(2.0)) - std::erf(a / std::sqrt(2.0)));
    };
    double oracle = one_dim(t, 1.0) * one_dim(t, 1.0);
    EXPECT_NEAR(weighted.eval({t, t}), oracle, 1e-8);
}

TEST(GeneralizedCovariogram, L2IndicatorInterval) {
    LogConcaveFn f = make_indicator(ConvexBody::polytope(1, {{0.0}, {1.0}}));
    LogConcaveFn c = l2_covariogram_function(f, 20000);
    EXPECT_NEAR(c.eval({0.5}), 0.5, 1e-3);
    EXPECT_NEAR(c.eval({0.0}), 1.0, 1e-6);
    EXPECT_NEAR(c.eval({-0.25}), 0.75, 1e-3);
    EXPECT_DOUBLE_EQ(c.eval({1.5}), 0.0);
}

TEST(GeneralizedCovariogram, L1IndicatorMatchesCovariogram) {
    ConvexBody K = ConvexBody::box({0.0, 0.0}, {1.0, 1.0});
    LogConcaveFn f = make_indicator(K);
    LogConcaveFn g = l1_covariogram_function(f, 30000);
    EXPECT_NEAR(g.eval({0.3, 0.2}), covariogram(K, {0.3, 0.2}), 2e-3);
}

TEST(GeneralizedCovariogram, MOrderAtOrigin) {
    ConvexBody T = ConvexBody::polytope(2, {{0, 0}, {1, 0}, {0, 1}});
    LogConcaveFn g2 = morder_covariogram_function(T, 2);
    EXPECT_EQ(g2.dimension, 4);
    EXPECT_NEAR(g2.eval({0, 0, 0, 0}), 0.5, 1e-13);
    // m = 2 with one translate at zero reduces to the classical covariogram
    EXPECT_NEAR(g2.eval({0.2, 0.1, 0.0, 0.0}), covariogram(T, {0.2, 0.1}), 1e-13);
    ConvexBody cube = ConvexBody::box({0, 0, 0}, {1, 1, 1});
    EXPECT_THROW(morder_covariogram_function(cube, 3), std::invalid_argument);
    LogConcaveFn gmc = morder_covariogram_function(cube, 3, true, 50000, 3);
    EXPECT_NEAR(gmc.eval(Point(9, 0.0)), 1.0, 2e-2);
}

TEST(GeneralizedCovariogram, L1MOrderInterval) {
    // min over three translates of the interval indicator: the overlap
    // [max(0, -x1, -x2), min(1, 1-x1, 1-x2)]
    LogConcaveFn f = make_indicator(ConvexBody::polytope(1, {{0.0}, {1.0}}));
    LogConcaveFn g = l1_morder_covariogram_function(f, 2, 20000);
    EXPECT_EQ(g.dimension, 2);
    EXPECT_NEAR(g.eval({0.3, -0.2}), 0.5, 2e-3);
    EXPECT_NEAR(g.eval({0.0, 0.0}), 1.0, 1e-6);
    EXPECT_DOUBLE_EQ(g.eval({1.5, 0.0}), 0.0);
}

TEST(GeneralizedCovariogram, Weighted3DUniformReducesToClassical) {
    ConvexBody S = ConvexBody::polytope(3, {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
    Measure lebesgue{make_indicator(ConvexBody::box({-3, -3, -3}, {3, 3, 3}))};
    LogConcaveFn weighted = weighted_covariogram_function(S, lebesgue, 5000);
    for (const Point& x : {Point{0.1, 0.05, 0.0}, Point{0.3, 0.0, 0.1}, Point{0.0, 0.0, 0.0}})
        EXPECT_NEAR(weighted.eval(x), covariogram(S, x), 1e-10);
}

TEST(GeneralizedCovariogram, MOrderDiagonalSection) {
    // all translates equal: Vol(K cap (K+x) cap (K+x)) = g_K(x), so the
    // diagonal of the order-2 body reproduces the classical one
    ConvexBody T = ConvexBody::polytope(2, {{0, 0}, {1, 0}, {0, 1}});
    LogConcaveFn g2 = morder_covariogram_function(T, 2);
    LogConcaveFn g1 = covariogram_function(T);
    for (double p : {-0.5, 1.0}) {
        Point x = {0.6, -0.3};
        Point diag = {0.6, -0.3, 0.6, -0.3};
        double a = ball_gauge(g2, p, diag);
        double b = ball_gauge(g1, p, x);
        EXPECT_NEAR(a, b, 1e-5 * b) << "p=" << p;
    }
}

TEST(GeneralizedCovariogram, MaxAtOriginProperty) {
    ConvexBody T = ConvexBody::polytope(2, {{0, 0}, {1, 0}, {0, 1}});
    LogConcaveFn fns[] = {covariogram_function(T),
                          l1_covariogram_function(make_indicator(centered_square()), 5000),
                          l2_covariogram_function(make_gaussian_isotropic(1, 1.0), 5000)};
    Rng rng(8);
    for (const auto& g : fns) {
        for (int i = 0; i < 1000; ++i) {
            Point x(g.dimension);
            for (int j = 0; j < g.dimension; ++j) x[j] = rng.uniform(-1.5, 1.5);
            EXPECT_LE(g.eval(x), g.origin_value * (1.0 + 1e-9));
        }
    }
}

TEST(Envelope, FittedBoundHolds) {
    for (const auto& g : {make_gaussian_isotropic(2, 2.0), make_exp_norm(2, 0.7)}) {
        Envelope env = fit_envelope(g);
        Rng rng(99);
        for (int i = 0; i < 2000; ++i) {
            Point x = {6.0 * rng.gaussian(), 6.0 * rng.gaussian()};
            EXPECT_LE(g.eval(x), env.a * std::exp(-env.c * norm(x)) * (1.0 + 1e-12));
        }
    }
}

TEST(Envelope, AnisotropicFamiliesStayBounded) {
    // slow axes must not inherit the fast axis' decay rate
    LogConcaveFn q = make_quadratic_exponential({{1.0, 0.0}, {0.0, 0.01}});
    LogConcaveFn gauss = make_gaussian({{1.0, 0.99}, {0.99, 1.0}});
    Rng rng(7);
    for (const auto& g : {q, gauss}) {
        ASSERT_TRUE(g.envelope.has_value());
        for (int i = 0; i < 3000; ++i) {
            Point x = {25.0 * rng.gaussian(), 25.0 * rng.gaussian()};
            EXPECT_LE(g.eval(x),
                      g.envelope->a * std::exp(-g.envelope->c * norm(x)) * (1.0 + 1e-12));
        }
    }
    EXPECT_THROW(make_quadratic_exponential({{1.0, 1.0}, {1.0, 1.0}}), std::invalid_argument);
}

TEST(Mollify, GaussianClosedForm) {
    // convolving the variance-1 gaussian with gamma_k gives variance 1 + 2/k
    LogConcaveFn g = make_gaussian_isotropic(1, 1.0);
    for (int k : {4, 64}) {
        MollifyResult res = mollify_detailed(g, k);
        double v = 1.0 + 2.0 / k;
        EXPECT_NEAR(norm(res.recenter_offset), 0.0, 1e-7);
        for (double x : {0.5, 1.0, 2.0}) {
            double ratio = res.fn.eval({x}) / res.fn.origin_value;
            EXPECT_NEAR(ratio, std::exp(-x * x / (2.0 * v)), 1e-9) << "k=" << k << " x=" << x;
        }
    }
}

TEST(Mollify, RecenteringNontrivial) {
    // e^{-|x|} restricted to [-1, +inf): the convolution peak drifts off the
    // origin and the recentering must bring it back
    ConvexBody seg = ConvexBody::polytope(1, {{-1.0}, {40.0}});
    LogConcaveFn g = make_restriction(make_exp_norm(1, 1.0), seg);
    MollifyResult res = mollify_detailed(g, 4);
    EXPECT_GT(norm(res.recenter_offset), 1e-4);
    double at0 = res.fn.eval({0.0});
    EXPECT_GE(at0, res.fn.eval({0.05}) - 1e-9);
    EXPECT_GE(at0, res.fn.eval({-0.05}) - 1e-9);
    EXPECT_NEAR(at0, res.fn.origin_value, 1e-12 * at0);
}

TEST(Mollify, InteriorConvergence) {
    // g_k -> g at interior points of the support
    LogConcaveFn g = make_indicator(ConvexBody::polytope(1, {{-1.0}, {1.0}}));
    Point probe = {0.3};
    double prev_err = kInf;
    for (int k : {4, 16, 64, 256}) {
        LogConcaveFn gk = mollify(g, k);
        double err = std::fabs(gk.eval(probe) - 1.0);
        EXPECT_LT(err, prev_err);
        prev_err = err;
    }
    EXPECT_LT(prev_err, 0.02);
}

TEST(Mollify, EverywherePositive) {
    LogConcaveFn g = make_indicator(centered_square());
    LogConcaveFn gk = mollify(g, 16);
    for (double r : {0.5, 1.5, 3.0})
        EXPECT_GT(gk.eval({r, r}), 0.0);
}

TEST(Mollify, SupErrorMonotoneInK) {
    // sup over a fixed interior probe set of |g_k - g| shrinks along the
    // doubling k ladder
    ConvexBody sq = ConvexBody::box({0.0, 0.0}, {1.0, 1.0});
    LogConcaveFn g = covariogram_function(sq);
    std::vector<Point> probes = {{0.2, 0.1}, {-0.4, 0.3}, {0.5, 0.5}, {0.0, -0.7}};
    double prev = kInf;
    for (int k : {4, 16, 64, 256}) {
        LogConcaveFn gk = mollify(g, k);
        double sup = 0.0;
        for (const auto& x : probes) sup = std::max(sup, std::fabs(gk.eval(x) - g.eval(x)));
        EXPECT_LT(sup, prev);
        prev = sup;
    }
    EXPECT_LT(prev, 0.03);
}
