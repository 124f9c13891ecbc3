// Frozen reference values. Any change here is a behavior change.
#include <gtest/gtest.h>

#include <cmath>

#include <revlink/revlink.hpp>

using namespace revlink;

TEST(Golden, EllipsoidPinching) {
    const double expected[][2] = {{1.2, 0.482253086419753}, {1.5, 0.197530864197531}, {2.0, 0.0625}, {3.0, 0.0123456790123457}};
    for (const auto& [b, d] : expected) EXPECT_NEAR(curvature_report(make_ellipsoid(b)).delta, d, 1e-12) << b;
}

TEST(Golden, EquatorLimits) {
    const double expected[][2] = {{1.2, 3.76991118430775}, {1.5, 4.71238898038469}, {2.0, 6.28318530717959}, {2.5, 7.85398163397448}};
    for (const auto& [b, lim] : expected) EXPECT_NEAR(equator_limit(make_ellipsoid(b)).value, lim, 1e-6) << b;
}

TEST(Golden, EllipsoidSwingValues) {
    // mean swing advance on E_b at level c, from the substituted integral
    EXPECT_NEAR(swing(make_ellipsoid(2.5), 0.5).mean_delta_u, ellipsoid_swing_substituted(2.5, 0.5), 1e-10);
    EXPECT_NEAR(swing(make_ellipsoid(1.5), 0.5).mean_delta_u, ellipsoid_swing_substituted(1.5, 0.5), 1e-10);
}

TEST(Golden, LinkingValues) {
    EXPECT_EQ(lk_equator_geodesic({8, 1}, EquatorOrientation::Plus).str(), "3");
    EXPECT_EQ(lk_equator_geodesic({2, 1}, EquatorOrientation::Plus).str(), "0");
    EXPECT_EQ(lk_equator_geodesic({0, 1}, EquatorOrientation::Plus).str(), "-1/2");
    EXPECT_EQ(lk_disjoint_simple(false).str(), "-1/2");
    EXPECT_EQ(lk_fibers().str(), "-1/2");
}

TEST(Golden, RoundSphereSelfLinking) {
    EXPECT_NEAR(self_linking_density(make_sphere(), 0.3), -0.0126651479552922, 1e-12);
}

TEST(Golden, DiagramExamples) {
    // orthogonal great circles
    const auto eq = latitude_circle(0.0, 1, 64, 0.01);
    std::vector<Vec3> mer;
    for (int i = 0; i < 64; ++i) {
        const double t = num::two_pi * (i + 0.5) / 64;
        mer.push_back({std::cos(t), 0.0, std::sin(t)});
    }
    EXPECT_EQ(intersections(eq, SphericalCurve(mer)).size(), 2u);
    // figure eight smooths into two circles
    std::vector<Vec3> f8;
    for (int i = 0; i < 400; ++i) {
        const double t = num::two_pi * (i + 0.5) / 400;
        f8.push_back(from_lat_lon(0.5 * std::sin(t), 2 * t));
    }
    EXPECT_EQ(seifert_smooth(SphericalCurve(f8)).components.size(), 2u);
}

TEST(Golden, SphereGeodesicsAreGreatCircles) {
    const auto S = make_sphere();
    const auto g = sample_closed_geodesic(S, 0.6, 60);
    EXPECT_EQ(g.type, GeodesicType(1, 1));
    EXPECT_TRUE(is_simple(g.curve));
    EXPECT_EQ(lk_oracle_equator(g.curve, EquatorOrientation::Plus).str(), "-1/2");
}
