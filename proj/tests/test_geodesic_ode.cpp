#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include <revlink/geodesic_ode.hpp>

using namespace revlink;

TEST(GeodesicOde, EquatorLaunchIsUnitSpeed) {
    const auto S = make_ellipsoid(1.8);
    for (double c : {-0.9, -0.2, 0.0, 0.5, 1.0}) {
        const auto x = equator_launch(S, c);
        EXPECT_NEAR(speed_squared(S, x), 1.0, 1e-14);
        EXPECT_NEAR(clairaut_constant(S, x), c, 1e-14);
    }
    EXPECT_THROW(equator_launch(S, 1.5), LevelOutOfRange);
}

TEST(GeodesicOde, SphereGreatCircleHalfSwing) {
    const auto S = make_sphere();
    for (double c : {0.1, 0.5, 0.93}) {
        const auto h = half_swing_ode(S, c);
        EXPECT_NEAR(h.delta_u_north, num::pi, 1e-9);
        EXPECT_NEAR(h.delta_u_south, num::pi, 1e-9);
        EXPECT_NEAR(h.t_half_north, num::pi, 1e-9);
    }
}

TEST(GeodesicOde, NegativeLevelTurnsBackwards) {
    const auto h = half_swing_ode(make_ellipsoid(1.5), -0.4);
    EXPECT_LT(h.delta_u_north, 0.0);
    EXPECT_LT(h.delta_u_south, 0.0);
}

TEST(GeodesicOde, ConservationOverLongArc) {
    const auto S = make_ellipsoid(2.5);
    const auto tr = integrate(S, equator_launch(S, 0.37), 100.0);
    EXPECT_LT(tr.drift.clairaut, 1e-8);
    EXPECT_LT(tr.drift.speed, 1e-8);
    EXPECT_NEAR(tr.t_end, 100.0, 1e-12);
    EXPECT_GT(tr.crossings.size(), 10u);
}

TEST(GeodesicOde, CrossingsAlternate) {
    const auto S = make_ellipsoid(1.3);
    const auto tr = integrate(S, equator_launch(S, 0.6), 40.0);
    ASSERT_GE(tr.crossings.size(), 4u);
    for (std::size_t i = 0; i < tr.crossings.size(); ++i) {
        EXPECT_EQ(tr.crossings[i].direction, i % 2 == 0 ? Direction::NorthToSouth : Direction::SouthToNorth);
        EXPECT_NEAR(tr.crossings[i].state.s, S.equator().s_e, 1e-9);
    }
}

TEST(GeodesicOde, MeridianPassesPoles) {
    const auto S = make_sphere();
    const auto tr = integrate(S, equator_launch(S, 0.0), 3 * num::pi + 0.5);
    ASSERT_GE(tr.crossings.size(), 3u);
    EXPECT_NEAR(tr.crossings[0].t, num::pi, 1e-8);
    EXPECT_NEAR(tr.crossings[1].t, 2 * num::pi, 1e-8);
    EXPECT_NEAR(tr.crossings[0].u, num::pi, 1e-12);
    EXPECT_NEAR(tr.crossings[1].u, 2 * num::pi, 1e-12);
}

TEST(GeodesicOde, ClosureOnSphere) {
    const auto cr = detect_closure(make_sphere(), 0.4);
    EXPECT_TRUE(cr.closed);
    EXPECT_EQ(cr.p, 1);
    EXPECT_EQ(cr.q, 1);
    EXPECT_EQ(cr.crossings, 2);
    EXPECT_NEAR(cr.period_length, 2 * num::pi, 1e-8);
}

TEST(GeodesicOde, ClosureFailsOnIrrationalLevel) {
    const auto cr = detect_closure(make_ellipsoid(1.5), 0.3137, 5);
    EXPECT_FALSE(cr.closed);
    EXPECT_EQ(cr.q, 5);
    EXPECT_GT(cr.residual, 1e-6);
}

TEST(GeodesicOde, RejectsBadInput) {
    const auto S = make_ellipsoid(2.0);
    EXPECT_THROW(integrate(S, {0, 0, 0.1, 0.1}, 1.0), InvalidInput);
    EXPECT_THROW(integrate(S, equator_launch(S, 0.3), -1.0), InvalidInput);
    EXPECT_THROW(half_swing_ode(S, 0.0), LevelOutOfRange);
    EXPECT_THROW(detect_closure(S, 1.0), LevelOutOfRange);
}

TEST(GeodesicOde, SampleOrbitHitsRequestedTimes) {
    const auto S = make_sphere();
    const auto x0 = equator_launch(S, 1.0 / std::sqrt(2.0));
    const auto pts = sample_orbit(S, x0, 2 * num::pi, 8, 0.0);
    ASSERT_EQ(pts.size(), 8u);
    EXPECT_DOUBLE_EQ(pts[0].u, x0.u);
    for (const auto& p : pts) EXPECT_NEAR(speed_squared(S, p), 1.0, 1e-9);
    EXPECT_THROW(sample_orbit(S, equator_launch(S, 0.0), 1.0, 4), InvalidInput);
}

TEST(GeodesicOde, TrajectoryCsv) {
    const auto S = make_ellipsoid(1.5);
    std::ostringstream os;
    write_trajectory_csv(os, S, equator_launch(S, 0.5), 1.0, 0.25);
    std::istringstream in(os.str());
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "t,u,s,du,ds");
    int rows = 0;
    while (std::getline(in, line)) {
        ++rows;
        EXPECT_EQ(line.find("nan"), std::string::npos);
    }
    EXPECT_EQ(rows, 5);
}
