#pragma once

#include <cmath>
#include <cstdlib>

#include "clairaut_map.hpp"
#include "errors.hpp"
#include "half_int.hpp"
#include "profile.hpp"

namespace revlink {

// Oriented fibers over two distinct points.
inline HalfInt lk_fibers() { return half(-1); }

// Two disjoint simple closed geodesics (or curves) on the sphere.
inline HalfInt lk_disjoint_simple(bool orientations_coincide) { return orientations_coincide ? half(1) : half(-1); }

// Two simple curves meeting in 2k points, met in the orders 1..2k along both (same_order) or 1..2k and 2k..1.
inline HalfInt lk_meander_free(int k, bool same_order) {
    if (k < 1) throw InvalidInput("meander-free configuration needs k >= 1");
    return same_order ? half(1) - HalfInt::from_int(k) : half(-1);
}

inline HalfInt lk_equator_geodesic(const GeodesicType& t, EquatorOrientation eq) {
    const bool plus = eq == EquatorOrientation::Plus;
    if (t.p == 0) return half(-1);
    const long long ap = std::abs(t.p);
    const bool with = (t.p > 0) == plus; // geodesic turns the same way as the equator
    return with ? half(ap) - HalfInt::from_int(t.q) : half(-ap);
}

// Two closed geodesics; the first lies on the outer torus (|c1| >= |c2|).
inline HalfInt lk_two_geodesics(const GeodesicType& t1, const GeodesicType& t2, bool first_is_outer) {
    if (!first_is_outer) throw InvalidInput("lk_two_geodesics expects the outer geodesic first");
    const long long p1 = t1.p, p2 = t2.p;
    if (p1 == 0 && p2 == 0) return half(-1);
    if (p1 == 0) throw InvalidInput("a meridian cannot be outer with respect to a non-meridian");
    if (p2 == 0) return half(-std::llabs(p1));
    if (p1 * p2 > 0) return std::llabs(p1) * (half(std::llabs(p2)) - HalfInt::from_int(t2.q));
    return half(-std::llabs(p1 * p2));
}

inline bool is_figure_eight(const GeodesicType& t) { return std::abs(t.p) == 2 && t.q == 1; }

namespace detail {

// Density from slopes with |c1| >= |c2|; sign1/sign2 are the revolution signs (0 for a meridian).
inline double density_from_slopes(const TorusSlope& s1, int sign1, const TorusSlope& s2, int sign2) {
    const double x1 = std::abs(s1.x), x2 = std::abs(s2.x);
    if (sign1 == 0 && sign2 == 0) return -s1.y * s2.y / 8.0;
    if (sign2 == 0) return -x1 * s2.y / 4.0;
    if (sign1 == sign2) return x1 * (x2 - s2.y) / 2.0;
    return -x1 * x2 / 2.0;
}

inline int sign_of(double c) { return c > 0 ? 1 : (c < 0 ? -1 : 0); }

} // namespace detail

// Linking per unit length squared of the invariant measures on the tori of levels c1 and c2.
// Levels equal to +-r_e denote the equator orbits; c = 0 denotes the meridian torus.
inline double linking_density(const ProfileSurface& S, double c1, double c2, QuadOptions opt = {}) {
    const double re = S.equator().r_e;
    if (std::abs(c1) > re || std::abs(c2) > re) throw LevelOutOfRange("levels must satisfy |c| <= r_e");
    if (std::abs(c1) < std::abs(c2)) std::swap(c1, c2);
    auto slope = [&](double c) {
        if (std::abs(c) == re) return equator_slope(S, c);
        if (c == 0.0) return slope_from_swing(meridian_swing(S));
        return torus_slope(S, c, opt);
    };
    return detail::density_from_slopes(slope(c1), detail::sign_of(c1), slope(c2), detail::sign_of(c2));
}

// Self-linking of the measure on level c: limit of the density against nearby levels.
inline double self_linking_density(const ProfileSurface& S, double c, QuadOptions opt = {}) {
    const double re = S.equator().r_e;
    if (std::abs(c) > re || c == 0.0) throw LevelOutOfRange("self-linking needs 0 < |c| <= r_e");
    const double sg = c < 0 ? -1.0 : 1.0;
    if (std::abs(c) == re) {
        // one-sided: nearby tori inside the equator; the equator orbit is the outer curve
        const auto sl = extrapolate_to_equator(S, [&](double cc) { return linking_density(S, c, cc, opt); }, sg);
        if (!(sl.error <= 1e-6)) throw NonConvergence("self-linking extrapolation did not settle");
        return sl.value;
    }
    const double gap = std::min(re - std::abs(c), std::abs(c));
    auto side = [&](double dir) {
        std::vector<double> vals;
        for (int k = 6; k <= 12; ++k) {
            const double h = gap * std::ldexp(1.0, -k);
            vals.push_back(linking_density(S, c, c + dir * sg * h, opt));
        }
        return num::richardson(vals, 2.0, 4);
    };
    const auto lo = side(-1.0), hi = side(1.0);
    if (std::abs(lo.value - hi.value) > 1e-6) throw NonConvergence("one-sided self-linking limits disagree");
    return 0.5 * (lo.value + hi.value);
}

} // namespace revlink
