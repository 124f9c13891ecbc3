#include <gtest/gtest.h>

#include <cmath>

#include <revlink/spherical.hpp>

using namespace revlink;

namespace {

SphericalCurve great_circle(const Vec3& normal, int n = 64) {
    const Vec3 nz = normalized(normal);
    const Vec3 a = normalized(cross(nz, std::abs(nz.x) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0}));
    const Vec3 b = cross(nz, a);
    std::vector<Vec3> pts;
    for (int i = 0; i < n; ++i) {
        const double t = num::two_pi * i / n;
        pts.push_back(a * std::cos(t) + b * std::sin(t));
    }
    return SphericalCurve(pts);
}

} // namespace

TEST(Spherical, VectorBasics) {
    const Vec3 x{1, 0, 0}, y{0, 1, 0};
    EXPECT_EQ(cross(x, y), (Vec3{0, 0, 1}));
    EXPECT_NEAR(angle_between(x, y), num::pi / 2, 1e-15);
    EXPECT_NEAR(norm(slerp(x, y, 0.5) - normalized({1, 1, 0})), 0.0, 1e-15);
    EXPECT_NEAR(norm(rotate(x, {0, 0, 1}, num::pi / 2) - y), 0.0, 1e-15);
    EXPECT_THROW(normalized({0, 0, 0}), InvalidInput);
    EXPECT_NEAR(from_lat_lon(num::pi / 2, 1.0).z, 1.0, 1e-15);
}

TEST(Spherical, ArcCrossingSign) {
    const Vec3 a{1, -0.1, 0}, b{1, 0.1, 0}, c{1, 0, -0.1}, d{1, 0, 0.1};
    const auto h = arc_crossing(a, b, normalized(cross(a, b)), c, d, normalized(cross(c, d)));
    ASSERT_TRUE(h.has_value());
    EXPECT_EQ(h->sign, 1);
    const auto h2 = arc_crossing(c, d, normalized(cross(c, d)), a, b, normalized(cross(a, b)));
    EXPECT_EQ(h2->sign, -1);
    // disjoint arcs
    const Vec3 e{1, 0.2, -0.1}, f{1, 0.2, 0.1};
    EXPECT_FALSE(arc_crossing(a, b, normalized(cross(a, b)), e, f, normalized(cross(e, f))).has_value());
}

TEST(Spherical, ArcCrossingDegenerate) {
    const Vec3 a{1, -0.1, 0}, b{1, 0.1, 0};
    const Vec3 c{1, 0, 0}, d{1, 0, 0.2}; // c lies on ab
    EXPECT_THROW(arc_crossing(a, b, normalized(cross(a, b)), normalized(c), normalized(d), normalized(cross(c, d))), DegeneracyError);
}

TEST(Spherical, CurveConstruction) {
    EXPECT_THROW(SphericalCurve(std::vector<Vec3>{{1, 0, 0}, {0, 1, 0}}), InvalidInput);
    EXPECT_THROW(SphericalCurve(std::vector<Vec3>{{1, 0, 0}, {-1, 0, 0}, {0, 0, 1}}), InvalidInput);
    const SphericalCurve c(std::vector<Vec3>{{1, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 0, 0}});
    EXPECT_EQ(c.size(), 3u);
    EXPECT_NEAR(c.length(), 3 * num::pi / 2, 1e-14);
}

TEST(Spherical, GreatCircleLengthAndTurning) {
    const auto g = great_circle({0.2, 0.3, 1.0}, 100);
    EXPECT_NEAR(g.length(), num::two_pi, 1e-2);
    double total = 0;
    for (std::size_t i = 0; i < g.size(); ++i) total += g.turning_angle(i);
    EXPECT_NEAR(total, 0.0, 1e-12);
}

TEST(Spherical, LatitudeCircleLeftSide) {
    const auto e = latitude_circle(0.2, 1);
    EXPECT_TRUE(e.left_of({0, 0, 1}));
    EXPECT_FALSE(e.left_of({0, 0, -1}));
    EXPECT_FALSE(e.left_of(from_lat_lon(0.1, 2.0)));
    const auto w = latitude_circle(0.2, -1);
    EXPECT_FALSE(w.left_of({0, 0, 1}));
    EXPECT_TRUE(w.left_of(from_lat_lon(-1.3, 0.5)));
}

TEST(Spherical, PointAtAndDistance) {
    const auto e = latitude_circle(0.0, 1, 360);
    EXPECT_NEAR(norm(e.point_at(0.0) - Vec3{1, 0, 0}), 0.0, 1e-15);
    EXPECT_NEAR(norm(e.point_at(e.length() + 0.0) - Vec3{1, 0, 0}), 0.0, 1e-12);
    EXPECT_NEAR(e.distance_to({0, 0, 1}), num::pi / 2, 1e-12);
    EXPECT_NEAR(e.distance_to(from_lat_lon(0.3, 1.0)), 0.3, 1e-4);
}

TEST(Spherical, ReversedAndSubdivided) {
    const auto e = latitude_circle(0.4, 1, 50);
    EXPECT_EQ(e.reversed().size(), 50u);
    EXPECT_EQ(e.subdivided().size(), 100u);
    EXPECT_NEAR(e.subdivided().length(), e.length(), 1e-12);
    EXPECT_EQ(e.reversed().left_of({0, 0, 1}), !e.left_of({0, 0, 1}));
}
