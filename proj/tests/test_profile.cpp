#include <gtest/gtest.h>

#include <cmath>

#include <revlink/io.hpp>
#include <revlink/profile.hpp>

using namespace revlink;

namespace {

std::vector<ProfileSample> sample_ellipsoid(double b, int n) {
    std::vector<ProfileSample> rows;
    for (int i = 0; i <= n; ++i) {
        const double v = -num::pi / 2 + num::pi * i / n;
        rows.push_back({v, i == 0 || i == n ? 0.0 : std::cos(v), b * std::sin(v)});
    }
    return rows;
}

} // namespace

TEST(Profile, SphereHasUnitCurvature) {
    const auto S = make_sphere();
    for (double s : {-1.2, -0.3, 0.0, 0.7, 1.5}) EXPECT_NEAR(gaussian_curvature(S, s), 1.0, 1e-14);
    EXPECT_NEAR(pole_curvature(S, true), 1.0, 1e-14);
    EXPECT_NEAR(S.equator().r_e, 1.0, 1e-15);
    EXPECT_NEAR(S.equator().s_e, 0.0, 1e-12);
}

TEST(Profile, EllipsoidCurvatureClosedForm) {
    const double b = 1.7;
    const auto S = make_ellipsoid(b);
    for (double v : {-1.1, -0.2, 0.4, 1.3}) {
        const double c = std::cos(v), s = std::sin(v);
        const double d = s * s + b * b * c * c;
        EXPECT_NEAR(gaussian_curvature(S, v), b * b / (d * d), 1e-12);
    }
    EXPECT_NEAR(pole_curvature(S, false), b * b, 1e-12);
}

TEST(Profile, EllipsoidPinching) {
    for (double b : {1.2, 1.5, 2.0, 3.0}) EXPECT_NEAR(curvature_report(make_ellipsoid(b)).delta, 1.0 / std::pow(b, 4), 1e-10) << b;
    // oblate
    EXPECT_NEAR(curvature_report(make_ellipsoid(0.8)).delta, std::pow(0.8, 4), 1e-10);
}

TEST(Profile, CurvatureReportLocatesExtremes) {
    const auto r = curvature_report(make_ellipsoid(2.0));
    EXPECT_NEAR(r.k_min, 0.25, 1e-12);
    EXPECT_NEAR(r.k_max, 4.0, 1e-12);
    EXPECT_NEAR(r.s_at_min, 0.0, 1e-5);
    EXPECT_NEAR(std::abs(r.s_at_max), num::pi / 2, 1e-12);
}

TEST(Profile, CurvatureNearPoleRejected) {
    const auto S = make_sphere();
    EXPECT_THROW(gaussian_curvature(S, S.s_max()), PoleProximityError);
    EXPECT_THROW(gaussian_curvature(S, S.s_min() + 1e-12), PoleProximityError);
}

TEST(Profile, InvalidParameters) {
    EXPECT_THROW(make_ellipsoid(0.0), InvalidInput);
    EXPECT_THROW(make_ellipsoid(-1.0), InvalidInput);
    EXPECT_THROW(make_pinched_sphere(0.0, 0.1), InvalidInput);
    EXPECT_THROW(make_pinched_sphere(0.3, 0.5), InvalidInput);
}

TEST(Profile, PinchedSphereHitsRequestedPinching) {
    for (double d : {0.2, 0.25, 0.5}) {
        const auto S = make_pinched_sphere(d, 0.1);
        const auto r = curvature_report(S, 2048);
        EXPECT_NEAR(r.delta, d, 1e-2) << d;
        EXPECT_NEAR(S.equator().r_e, 1.0, 1e-12);
        EXPECT_NEAR(gaussian_curvature(S, 0.0), d, 1e-12);
    }
}

TEST(Profile, PinchedSphereIsSmoothAcrossBands) {
    const auto S = make_pinched_sphere(0.3, 0.1);
    // band edges sit at v = pi/2 - eps and pi/2 - 2 eps
    for (double edge : {num::pi / 2 - 0.1, num::pi / 2 - 0.2}) {
        const auto a = S(edge - 1e-9), b = S(edge + 1e-9);
        EXPECT_NEAR(a.g, b.g, 1e-7);
        EXPECT_NEAR(a.dg, b.dg, 1e-6);
        EXPECT_NEAR(gaussian_curvature(S, edge - 1e-9), gaussian_curvature(S, edge + 1e-9), 1e-6);
    }
}

TEST(Profile, ValidateAcceptsConvexSurfaces) {
    for (const auto& S : {make_sphere(), make_ellipsoid(0.7), make_ellipsoid(2.5), make_pinched_sphere(0.25, 0.1)}) {
        const auto rep = validate(S);
        EXPECT_TRUE(rep.passed) << S.describe();
        EXPECT_TRUE(rep.issues.empty());
    }
}

TEST(Profile, ValidateReportsPeanut) {
    const auto S = io::parse_surface(std::string("file:") + REVLINK_DEMO_DIR + "/peanut_samples.csv");
    const auto rep = validate(S);
    EXPECT_FALSE(rep.passed);
    bool curvature = false, critical = false;
    for (const auto& i : rep.issues) {
        curvature = curvature || i.check == "curvature";
        critical = critical || i.check == "critical_points";
    }
    EXPECT_TRUE(curvature);
    EXPECT_TRUE(critical);
    // runs of bad cells are merged
    EXPECT_LT(rep.issues.size(), 10u);
    EXPECT_THROW(S.equator(), MultipleCriticalPoints);
}

TEST(Profile, SampledEllipsoidMatchesAnalytic) {
    const auto S = from_samples(sample_ellipsoid(1.5, 400));
    const auto E = make_ellipsoid(1.5);
    EXPECT_NEAR(S.equator().r_e, 1.0, 1e-6);
    for (double v : {-1.0, -0.3, 0.2, 0.9}) EXPECT_NEAR(gaussian_curvature(S, v), gaussian_curvature(E, v), 1e-4);
    EXPECT_TRUE(validate(S).passed);
}

TEST(Profile, SampleTableChecks) {
    EXPECT_THROW(from_samples(sample_ellipsoid(1.5, 10)), TooFewSamples);
    auto rows = sample_ellipsoid(1.5, 40);
    rows[5].s = rows[4].s;
    EXPECT_THROW(from_samples(rows), FormatError);
    rows = sample_ellipsoid(1.5, 40);
    rows.front().f = 0.1;
    EXPECT_THROW(from_samples(rows), FormatError);
    rows = sample_ellipsoid(1.5, 40);
    rows[10].f = -0.2;
    EXPECT_THROW(from_samples(rows), FormatError);
}

TEST(Profile, SplineReproducesCubic) {
    std::vector<double> x, y;
    for (int i = 0; i < 12; ++i) {
        const double t = 0.3 * i;
        x.push_back(t);
        y.push_back(t * t * t - 2 * t);
    }
    const CubicSpline sp(x, y, -2.0, 3 * x.back() * x.back() - 2);
    for (double t : {0.1, 1.05, 2.9}) {
        const auto v = sp(t);
        EXPECT_NEAR(v.y, t * t * t - 2 * t, 1e-12);
        EXPECT_NEAR(v.dy, 3 * t * t - 2, 1e-11);
        EXPECT_NEAR(v.d2y, 6 * t, 1e-9);
    }
}

TEST(Profile, DescribeIncludesParameters) {
    EXPECT_EQ(make_ellipsoid(2.5).describe(), "ellipsoid(2.5)");
    EXPECT_EQ(make_sphere().describe(), "sphere");
}
