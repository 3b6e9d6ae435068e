#include "radialbodies/geometry.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace radialbodies;

namespace {

ConvexBody unit_square() { return ConvexBody::box({0.0, 0.0}, {1.0, 1.0}); }

ConvexBody unit_square_polytope() {
    return ConvexBody::polytope(2, {{0, 0}, {1, 0}, {1, 1}, {0, 1}});
}

ConvexBody right_triangle() { return ConvexBody::polytope(2, {{0, 0}, {1, 0}, {0, 1}}); }

ConvexBody random_polygon(int sides, Rng& rng) {
    // jittered angles on a circle keep the points in convex position
    std::vector<Point> pts;
    std::vector<double> angles;
    for (int i = 0; i < sides; ++i)
        angles.push_back(2.0 * M_PI * (i + 0.3 * rng.uniform()) / sides);
    for (double a : angles) pts.push_back({std::cos(a), std::sin(a)});
    return ConvexBody::polytope(2, std::move(pts));
}

}  // namespace

TEST(MinkowskiFunctional, ScalingOfUnitBall) {
    ConvexBody K = ConvexBody::box({-1.0, -1.0}, {1.0, 1.0});
    EXPECT_NEAR(minkowski_functional(K, {2.0, 0.0}), 2.0, 1e-14);
    EXPECT_DOUBLE_EQ(minkowski_functional(K, {0.0, 0.0}), 0.0);
}

TEST(MinkowskiFunctional, RayMissesEveryDilate) {
    ConvexBody K = ConvexBody::polytope(1, {{1.0}, {2.0}});
    EXPECT_TRUE(std::isinf(minkowski_functional(K, {-1.0})));
    EXPECT_NEAR(minkowski_functional(K, {1.5}), 0.75, 1e-14);
}

TEST(MinkowskiFunctional, Homogeneity) {
    Rng rng(11);
    ConvexBody K = random_polygon(7, rng);
    for (int i = 0; i < 200; ++i) {
        Point x = {rng.uniform(-2, 2), rng.uniform(-2, 2)};
        double lam = rng.uniform(0.1, 5.0);
        double g1 = minkowski_functional(K, x);
        double g2 = minkowski_functional(K, scaled(x, lam));
        if (std::isfinite(g1)) EXPECT_NEAR(g2, lam * g1, 1e-10 * std::max(1.0, lam * g1));
    }
}

TEST(MinkowskiFunctional, BallCases) {
    ConvexBody B = ConvexBody::ball({0.0, 0.0}, 2.0);
    EXPECT_NEAR(minkowski_functional(B, {4.0, 0.0}), 2.0, 1e-13);
    ConvexBody off = ConvexBody::ball({1.0, 0.0}, 0.5);  // origin outside
    EXPECT_TRUE(std::isinf(minkowski_functional(off, {-1.0, 0.0})));
    EXPECT_NEAR(minkowski_functional(off, {1.0, 0.0}), 2.0 / 3.0, 1e-13);
}

TEST(Volume, ClosedForms) {
    EXPECT_NEAR(volume(unit_square()), 1.0, 1e-15);
    EXPECT_NEAR(volume(unit_square_polytope()), 1.0, 1e-14);
    EXPECT_NEAR(volume(right_triangle()), 0.5, 1e-14);
    EXPECT_NEAR(volume(ConvexBody::ball({0.0, 0.0}, 1.0)), M_PI, 1e-13);
    ConvexBody cube = ConvexBody::polytope(
        3, {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 0}, {1, 0, 1}, {0, 1, 1}, {1, 1, 1}});
    EXPECT_NEAR(volume(cube), 1.0, 1e-13);
    ConvexBody simplex = ConvexBody::polytope(3, {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
    EXPECT_NEAR(volume(simplex), 1.0 / 6.0, 1e-14);
}

TEST(Volume, MonteCarloAgrees) {
    ConvexBody T = right_triangle();
    McEstimate est = volume_mc(T, 200000, 7);
    EXPECT_NEAR(est.value, 0.5, 4.0 * est.std_error);
    EXPECT_GT(est.std_error, 0.0);
}

TEST(HalfspacePolytope, SquareRoundTrip) {
    std::vector<HalfSpace> hs = {HalfSpace({1.0, 0.0}, 1.0), HalfSpace({-1.0, 0.0}, 0.0),
                                 HalfSpace({0.0, 1.0}, 1.0), HalfSpace({0.0, -1.0}, 0.0)};
    ConvexBody K = ConvexBody::from_halfspaces(2, hs);
    EXPECT_EQ(K.vertices().size(), 4u);
    EXPECT_NEAR(volume(K), 1.0, 1e-12);
}

TEST(HalfspacePolytope, UnboundedRejected) {
    std::vector<HalfSpace> slab = {HalfSpace({1.0, 0.0}, 1.0), HalfSpace({-1.0, 0.0}, 1.0),
                                   HalfSpace({0.0, 1.0}, 1.0)};
    EXPECT_THROW(ConvexBody::from_halfspaces(2, slab), std::invalid_argument);
}

TEST(HalfspacePolytope, Tetrahedron) {
    double s = 1.0 / std::sqrt(3.0);
    std::vector<HalfSpace> hs = {HalfSpace({-1.0, 0.0, 0.0}, 0.0), HalfSpace({0.0, -1.0, 0.0}, 0.0),
                                 HalfSpace({0.0, 0.0, -1.0}, 0.0), HalfSpace({s, s, s}, s)};
    ConvexBody K = ConvexBody::from_halfspaces(3, hs);
    EXPECT_EQ(K.vertices().size(), 4u);
    EXPECT_NEAR(volume(K), 1.0 / 6.0, 1e-12);
}

TEST(Polytope, DegenerateRejected) {
    EXPECT_THROW(ConvexBody::polytope(2, {{0, 0}, {1, 1}, {2, 2}}), std::invalid_argument);
    EXPECT_THROW(ConvexBody::polytope(3, {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0}}),
                 std::invalid_argument);
    EXPECT_THROW(ConvexBody::ball({0.0, 0.0}, 0.0), std::invalid_argument);
}

TEST(Covariogram, SquareProductForm) {
    for (const ConvexBody& K : {unit_square(), unit_square_polytope()}) {
        EXPECT_NEAR(covariogram(K, {0.5, 0.5}), 0.25, 1e-13);
        EXPECT_NEAR(covariogram(K, {0.0, 0.0}), 1.0, 1e-13);  // max g_K = Vol(K)
        EXPECT_DOUBLE_EQ(covariogram(K, {2.0, 0.0}), 0.0);    // supported on DK
    }
}

TEST(Covariogram, DiskLens) {
    ConvexBody D = ConvexBody::ball({0.0, 0.0}, 1.0);
    double expected = 2.0 * (std::acos(0.5) - 0.5 * std::sqrt(3.0) / 2.0);
    EXPECT_NEAR(covariogram(D, {1.0, 0.0}), expected, 1e-12);
    EXPECT_NEAR(expected, 1.22837, 1e-5);
}

TEST(Covariogram, CubePolytopeMatchesBoxFormula) {
    ConvexBody box3 = ConvexBody::box({0, 0, 0}, {1, 1, 1});
    ConvexBody cube = ConvexBody::polytope(
        3, {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 0}, {1, 0, 1}, {0, 1, 1}, {1, 1, 1}});
    Rng rng(3);
    for (int i = 0; i < 100; ++i) {
        Point x = {rng.uniform(-1.2, 1.2), rng.uniform(-1.2, 1.2), rng.uniform(-1.2, 1.2)};
        EXPECT_NEAR(covariogram(cube, x), covariogram(box3, x), 1e-12);
    }
}

TEST(Covariogram, EvennessProperty) {
    Rng rng(19);
    ConvexBody K = random_polygon(6, rng);
    for (int i = 0; i < 300; ++i) {
        Point x = {rng.uniform(-2, 2), rng.uniform(-2, 2)};
        double a = covariogram(K, x);
        double b = covariogram(K, scaled(x, -1.0));
        EXPECT_NEAR(a, b, 1e-10 * std::max(1.0, a));
    }
}

TEST(Covariogram, SupportEqualsDifferenceBody) {
    Rng rng(23);
    ConvexBody K = random_polygon(5, rng);
    ConvexBody DK = difference_body(K);
    DirectionGrid grid = make_direction_grid(2, 64);
    for (const Point& th : grid.directions) {
        double tau = 1.0 / minkowski_functional(DK, th);
        EXPECT_GT(covariogram(K, scaled(th, tau * (1.0 - 1e-6))), 0.0);
        EXPECT_DOUBLE_EQ(covariogram(K, scaled(th, tau * (1.0 + 1e-6))), 0.0);
    }
}

TEST(Covariogram, LogConcavitySpotCheck) {
    Rng rng(29);
    ConvexBody K = right_triangle();
    ConvexBody DK = difference_body(K);
    int tested = 0;
    while (tested < 500) {
        Point x = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
        Point y = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
        if (minkowski_functional(DK, x) >= 1.0 || minkowski_functional(DK, y) >= 1.0) continue;
        double gx = covariogram(K, x), gy = covariogram(K, y);
        double gm = covariogram(K, scaled(added(x, y), 0.5));
        EXPECT_GE(gm * gm, gx * gy - 1e-9);
        ++tested;
    }
}

TEST(Covariogram, MonteCarloPath) {
    ConvexBody K = unit_square();
    McEstimate est = covariogram_mc(K, {0.5, 0.5}, 200000, 5);
    EXPECT_NEAR(est.value, 0.25, 4.0 * est.std_error);
}

TEST(DifferenceBody, SquareAndTriangle) {
    EXPECT_NEAR(difference_body_gauge(unit_square(), {2.0, 0.0}), 2.0, 1e-12);
    EXPECT_NEAR(difference_body_gauge(unit_square_polytope(), {2.0, 0.0}), 2.0, 1e-12);
    // DT is the hexagon with edge x + y = 1
    EXPECT_NEAR(difference_body_gauge(right_triangle(), {1.0, 1.0}), 2.0, 1e-12);
    EXPECT_DOUBLE_EQ(difference_body_gauge(right_triangle(), {0.0, 0.0}), 0.0);
}

TEST(DifferenceBody, MinkowskiSumAgreesWithBisection) {
    Rng rng(31);
    ConvexBody K = random_polygon(7, rng);
    ConvexBody DK = difference_body(K);
    DirectionGrid grid = make_direction_grid(2, 256);
    for (const Point& th : grid.directions) {
        double exact = minkowski_functional(DK, th);
        double bisect = difference_body_gauge_bisect(K, th);
        EXPECT_NEAR(bisect, exact, 1e-8 * exact);
    }
}

TEST(DifferenceBody, Simplex3D) {
    ConvexBody S = ConvexBody::polytope(3, {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
    ConvexBody DS = difference_body(S);
    DirectionGrid grid = make_direction_grid(3, 32);
    for (const Point& th : grid.directions) {
        double exact = minkowski_functional(DS, th);
        double bisect = difference_body_gauge_bisect(S, th);
        EXPECT_NEAR(bisect, exact, 1e-8 * exact);
    }
}

TEST(ProjectionVolume, Shadows) {
    EXPECT_NEAR(projection_volume(unit_square(), {1.0, 0.0}), 1.0, 1e-13);
    double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    EXPECT_NEAR(projection_volume(unit_square(), {inv_sqrt2, inv_sqrt2}), std::sqrt(2.0), 1e-13);
    EXPECT_NEAR(projection_volume(ConvexBody::ball({0.0, 0.0}, 1.0), {0.0, 1.0}), 2.0, 1e-13);
    ConvexBody cube = ConvexBody::box({0, 0, 0}, {1, 1, 1});
    EXPECT_NEAR(projection_volume(cube, {0.0, 0.0, 1.0}), 1.0, 1e-12);
    double s = 1.0 / std::sqrt(3.0);
    EXPECT_NEAR(projection_volume(cube, {s, s, s}), std::sqrt(3.0), 1e-12);
}

TEST(PolarProjectionGauge, Square) {
    EXPECT_NEAR(polar_projection_gauge(unit_square(), {1.0, 0.0}), 1.0, 1e-13);
    EXPECT_NEAR(polar_projection_gauge(unit_square(), {1.0, 1.0}), 2.0, 1e-13);
    EXPECT_DOUBLE_EQ(polar_projection_gauge(unit_square(), {0.0, 0.0}), 0.0);
}

TEST(SamplePoint, MembershipAndMoments) {
    ConvexBody K = unit_square();
    Rng rng(1);
    double sx = 0.0, sy = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        Point p = sample_point(K, rng);
        EXPECT_TRUE(K.contains(p));
        sx += p[0];
        sy += p[1];
    }
    double sigma = std::sqrt(1.0 / 12.0 / n);
    EXPECT_NEAR(sx / n, 0.5, 3.0 * sigma);
    EXPECT_NEAR(sy / n, 0.5, 3.0 * sigma);
}

TEST(SamplePoint, BoxAcceptsEveryDraw) {
    // sampling the box itself consumes exactly dim uniforms per point
    ConvexBody K = unit_square();
    Rng a(42), b(42);
    for (int i = 0; i < 1000; ++i) {
        Point p = sample_point(K, a);
        Point q = {b.uniform(0.0, 1.0), b.uniform(0.0, 1.0)};
        EXPECT_DOUBLE_EQ(p[0], q[0]);
        EXPECT_DOUBLE_EQ(p[1], q[1]);
    }
}

TEST(DirectionGrid, DeterministicAndUnit) {
    DirectionGrid g1 = make_direction_grid(3, 128, GridScheme::SeededRandom, 9);
    DirectionGrid g2 = make_direction_grid(3, 128, GridScheme::SeededRandom, 9);
    ASSERT_EQ(g1.directions.size(), 128u);
    for (std::size_t i = 0; i < g1.directions.size(); ++i) {
        EXPECT_EQ(g1.directions[i], g2.directions[i]);
        EXPECT_NEAR(norm(g1.directions[i]), 1.0, 1e-12);
    }
    DirectionGrid ua = make_direction_grid(2, 8);
    EXPECT_EQ(ua.scheme, GridScheme::UniformAngle);
    EXPECT_NEAR(ua.directions[2][1], 1.0, 1e-12);  // quarter turn
    DirectionGrid fs = make_direction_grid(3, 64);
    EXPECT_EQ(fs.scheme, GridScheme::FibonacciSphere);
    for (const auto& d : fs.directions) EXPECT_NEAR(norm(d), 1.0, 1e-12);
}

TEST(MonteCarloPaths, FourDimensionalBox) {
    // exact formulas stop at dimension 3; the explicit MC path keeps going
    ConvexBody box4 = ConvexBody::box({0, 0, 0, 0}, {1, 2, 1, 1});
    McEstimate vol = volume_mc(box4, 100000, 3);
    EXPECT_NEAR(vol.value, 2.0, 1e-9);  // box in its own bounding box
    McEstimate cov = covariogram_mc(box4, {0.5, 0.0, 0.0, 0.0}, 200000, 4);
    EXPECT_NEAR(cov.value, 1.0, 4.0 * cov.std_error);
    // boxes keep their product closed form in any dimension
    EXPECT_NEAR(covariogram(box4, {0.5, 0.0, 0.0, 0.0}), 1.0, 1e-14);
}

TEST(Hull3D, ContainsInputPoints) {
    Rng rng(77);
    std::vector<Point> pts;
    for (int i = 0; i < 40; ++i)
        pts.push_back({rng.gaussian(), rng.gaussian(), rng.gaussian()});
    ConvexBody K = ConvexBody::polytope(3, pts);
    for (const auto& p : pts) EXPECT_TRUE(K.contains(p, 1e-9 * K.diameter()));
    EXPECT_GT(volume(K), 0.0);
    // support function from vertices dominates every input point
    DirectionGrid grid = make_direction_grid(3, 32);
    for (const auto& th : grid.directions) {
        double h = support_function(K, th);
        for (const auto& p : pts) EXPECT_LE(dot(p, th), h + 1e-9);
    }
}
