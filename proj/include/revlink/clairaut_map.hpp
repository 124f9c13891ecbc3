#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "geodesic_ode.hpp"
#include "half_int.hpp"
#include "numerics.hpp"
#include "profile.hpp"

namespace revlink {

struct ClairautLevel {
    double c = 0.0;
    double theta_e = 0.0; // angle with e+ at a south-to-north crossing
    double turning_s_north = 0.0, turning_s_south = 0.0;
};

struct SwingData {
    double delta_u_north = 0.0, delta_u_south = 0.0;
    double mean_delta_u = 0.0;
    double t_half_north = 0.0, t_half_south = 0.0;
    double t_half_mean() const { return 0.5 * (t_half_north + t_half_south); }
};

struct TorusSlope {
    double x = 0.0; // turns per unit time
    double y = 0.0; // equator crossings per unit time
};

struct QuadOptions {
    double rel_tol = 1e-10;
};

inline ClairautLevel clairaut_level(const ProfileSurface& S, double c) {
    const EquatorInfo eq = S.equator();
    const double ac = std::abs(c);
    if (!(ac > 0 && ac < eq.r_e)) throw LevelOutOfRange("Clairaut level must satisfy 0 < |c| < r_e");
    auto gap = [&](double s) { return S(s).f - ac; };
    ClairautLevel L;
    L.c = c;
    L.theta_e = std::acos(c / eq.r_e);
    L.turning_s_north = num::bisect(gap, eq.s_e, S.s_max());
    L.turning_s_south = num::bisect(gap, S.s_min(), eq.s_e);
    return L;
}

namespace detail {

struct Quarter {
    double du = 0.0, dt = 0.0;
};

// Quarter swing between the turning point s* and the equator. With s = s* -/+ tau^2 the
// inverse square root at s* disappears; f^2 - c^2 is factored as (f - f*)(f + f*).
inline Quarter quarter_swing(const ProfileSurface& S, double s_e, double s_star, bool north, double ac, double rel_tol) {
    const ProfileJet js = S(s_star);
    const double fs = js.f, dir = north ? -1.0 : 1.0;
    const double T = std::sqrt(std::abs(s_star - s_e));
    auto pieces = [&](double tau, double& J, double& f, double& root) {
        const double ds = dir * tau * tau;
        const ProfileJet j = S(s_star + ds);
        // f - f*: direct difference when it is large, otherwise the integral of f' (no cancellation)
        double D = j.f - fs;
        if (D < 1e-2 * fs) D = num::gauss_panel<16>([&](double x) { return S(x).df; }, s_star, s_star + ds);
        J = std::sqrt(j.df * j.df + j.dg * j.dg);
        f = j.f;
        root = std::sqrt(std::max(D, 0.0) * (j.f + fs));
    };
    auto gu = [&](double tau) {
        double J, f, root;
        pieces(tau, J, f, root);
        return root > 0 ? 2.0 * tau * ac * J / (f * root) : 0.0;
    };
    auto gt = [&](double tau) {
        double J, f, root;
        pieces(tau, J, f, root);
        return root > 0 ? 2.0 * tau * f * J / root : 0.0;
    };
    const double tq = rel_tol * 1e-2;
    return {num::gauss_adaptive(gu, 0.0, T, tq).value, num::gauss_adaptive(gt, 0.0, T, tq).value};
}

} // namespace detail

// Longitude advance and arclength of each hemisphere excursion at Clairaut level c.
inline SwingData swing(const ProfileSurface& S, double c, QuadOptions opt = {}) {
    const ClairautLevel L = clairaut_level(S, c);
    const EquatorInfo eq = S.equator();
    const double ac = std::abs(c), sg = c < 0 ? -1.0 : 1.0;
    const auto qn = detail::quarter_swing(S, eq.s_e, L.turning_s_north, true, ac, opt.rel_tol);
    const auto qs = detail::quarter_swing(S, eq.s_e, L.turning_s_south, false, ac, opt.rel_tol);
    SwingData d;
    d.delta_u_north = sg * 2.0 * qn.du;
    d.delta_u_south = sg * 2.0 * qs.du;
    d.mean_delta_u = 0.5 * (d.delta_u_north + d.delta_u_south);
    d.t_half_north = 2.0 * qn.dt;
    d.t_half_south = 2.0 * qs.dt;
    return d;
}

// Meridians: longitude jumps by pi at each pole passage; times are the meridian arc lengths.
inline SwingData meridian_swing(const ProfileSurface& S) {
    const EquatorInfo eq = S.equator();
    auto J = [&](double s) {
        const ProfileJet j = S(s);
        return std::sqrt(j.df * j.df + j.dg * j.dg);
    };
    SwingData d;
    d.delta_u_north = d.delta_u_south = d.mean_delta_u = num::pi;
    d.t_half_north = 2.0 * num::gauss_adaptive(J, eq.s_e, S.s_max(), 1e-13).value;
    d.t_half_south = 2.0 * num::gauss_adaptive(J, S.s_min(), eq.s_e, 1e-13).value;
    return d;
}

inline double rotation_number(const ProfileSurface& S, double c, QuadOptions opt = {}) {
    return swing(S, c, opt).mean_delta_u / num::pi;
}

inline TorusSlope slope_from_swing(const SwingData& d) {
    const double th = d.t_half_mean();
    return {d.mean_delta_u / (num::two_pi * th), 1.0 / th};
}

inline TorusSlope torus_slope(const ProfileSurface& S, double c, QuadOptions opt = {}) {
    return slope_from_swing(swing(S, c, opt));
}

// Slope of the lifted equator orbit: one turn per circumference, no crossings.
inline TorusSlope equator_slope(const ProfileSurface& S, double sign) {
    return {(sign < 0 ? -1.0 : 1.0) / (num::two_pi * S.equator().r_e), 0.0};
}

// Continued-fraction convergents p/q of x.
inline std::vector<std::pair<long long, long long>> convergents(double x, int max_terms = 12, double tol = 1e-12) {
    std::vector<std::pair<long long, long long>> out;
    long long p0 = 1, q0 = 0, p1 = static_cast<long long>(std::floor(x)), q1 = 1;
    out.push_back({p1, q1});
    double r = x - std::floor(x);
    for (int i = 1; i < max_terms && std::abs(r) > tol; ++i) {
        r = 1.0 / r;
        const long long a = static_cast<long long>(std::floor(r));
        r -= static_cast<double>(a);
        const long long p2 = a * p1 + p0, q2 = a * q1 + q0;
        if (q2 > 1000000000LL) break;
        out.push_back({p2, q2});
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
    }
    return out;
}

struct BoundaryLimit {
    double value = 0.0;
    double error = 0.0;
};

// Richardson extrapolation of fn(c) to c -> sign * r_e through c = sign * r_e (1 - 2^-k).
template <class Fn>
BoundaryLimit extrapolate_to_equator(const ProfileSurface& S, Fn&& fn, double sign = 1.0, int k0 = 8, int k1 = 16) {
    const double re = S.equator().r_e;
    std::vector<double> vals;
    for (int k = k0; k <= k1; ++k) vals.push_back(fn(sign * re * (1.0 - std::ldexp(1.0, -k))));
    const auto r = num::richardson(vals, 2.0, 6);
    return {r.value, r.error};
}

// lim mean_delta_u as the level approaches the equator.
inline BoundaryLimit equator_limit(const ProfileSurface& S, QuadOptions opt = {}) {
    const auto r = extrapolate_to_equator(S, [&](double c) { return swing(S, c, opt).mean_delta_u; });
    if (!(r.error <= 1e-4)) throw NonConvergence("equator limit extrapolation did not settle (error " + std::to_string(r.error) + ")");
    return r;
}

// Mean swing advance on the levels c_i = r_e i / n, i = 1..n-1.
struct LevelScan {
    std::vector<double> c;
    std::vector<SwingData> swing;
};

inline LevelScan scan_levels(const ProfileSurface& S, int grid_n = 512, unsigned workers = 1, QuadOptions opt = {}) {
    if (grid_n < 2) throw InvalidInput("level grid too small");
    const double re = S.equator().r_e;
    LevelScan sc;
    for (int i = 1; i < grid_n; ++i) sc.c.push_back(re * i / grid_n);
    sc.swing = num::parallel_map<SwingData>(sc.c.size(), workers, [&](std::size_t i) { return swing(S, sc.c[i], opt); });
    return sc;
}

struct SupResult {
    double sup = 0.0;
    double argmax = 0.0; // level of the interior maximum, or r_e when at the boundary
    bool at_boundary = false;
    double interior_max = 0.0;
    BoundaryLimit limit;
};

inline SupResult sup_mean_swing(const ProfileSurface& S, const LevelScan& sc, QuadOptions opt = {}) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < sc.c.size(); ++i)
        if (sc.swing[i].mean_delta_u > sc.swing[best].mean_delta_u) best = i;
    const double lo = sc.c[best == 0 ? 0 : best - 1], hi = sc.c[std::min(best + 1, sc.c.size() - 1)];
    auto m = [&](double c) { return swing(S, c, opt).mean_delta_u; };
    num::Extremum e{sc.c[best], sc.swing[best].mean_delta_u};
    if (hi > lo) {
        const auto g = num::golden_max(m, lo, hi, 1e-10);
        if (g.value > e.value) e = g;
    }
    SupResult r;
    r.interior_max = e.value;
    r.limit = equator_limit(S, opt);
    if (r.limit.value >= e.value) {
        r.sup = r.limit.value;
        r.argmax = S.equator().r_e;
        r.at_boundary = true;
    } else {
        r.sup = e.value;
        r.argmax = e.x;
    }
    return r;
}

inline SupResult sup_mean_swing(const ProfileSurface& S, int grid_n = 512, unsigned workers = 1, QuadOptions opt = {}) {
    if (grid_n < 128) throw InvalidInput("sup search needs at least 128 levels");
    return sup_mean_swing(S, scan_levels(S, grid_n, workers, opt), opt);
}

struct ClosedLevel {
    double c = 0.0;
    bool degenerate = false; // every level closes (round sphere)
};

// Level carrying closed geodesics of type (p, q): solves mean_delta_u(c) = pi p / q.
inline std::optional<ClosedLevel> find_closed_geodesic(const ProfileSurface& S, int p, int q, const LevelScan& sc,
                                                       QuadOptions opt = {}) {
    if (q < 1 || p < 0 || std::gcd(p, q) != 1) throw InvalidInput("closed geodesic search needs p >= 0, q >= 1, gcd(p,q) = 1");
    if (p == 0) return ClosedLevel{0.0, false}; // meridians
    const double target = num::pi * p / q;
    bool all = true;
    for (const auto& d : sc.swing) all = all && std::abs(d.mean_delta_u - target) < 1e-9;
    if (all && !sc.c.empty()) return ClosedLevel{0.5 * S.equator().r_e, true};
    auto g = [&](double c) { return swing(S, c, opt).mean_delta_u - target; };
    for (std::size_t i = 0; i + 1 < sc.c.size(); ++i) {
        const double a = sc.swing[i].mean_delta_u - target, b = sc.swing[i + 1].mean_delta_u - target;
        if (a == 0.0) return ClosedLevel{sc.c[i], false};
        if ((a < 0) != (b < 0)) return ClosedLevel{num::bisect(g, sc.c[i], sc.c[i + 1], 1e-15), false};
    }
    return std::nullopt;
}

inline std::optional<ClosedLevel> find_closed_geodesic(const ProfileSurface& S, int p, int q, int grid_n = 512,
                                                       unsigned workers = 1, QuadOptions opt = {}) {
    return find_closed_geodesic(S, p, q, scan_levels(S, grid_n, workers, opt), opt);
}

enum class VerdictStatus { LeftHanded, NotLeftHanded };

inline std::string to_string(VerdictStatus s) { return s == VerdictStatus::LeftHanded ? "LeftHanded" : "NotLeftHanded"; }

struct Witness {
    double c = 0.0;
    GeodesicType type;
    double residual = 0.0;
    int crossings = 0;
    double period_length = 0.0;
    bool closed = false;
    double turning_s_north = 0.0, turning_s_south = 0.0;
};

struct Verdict {
    VerdictStatus status = VerdictStatus::LeftHanded;
    double sup_mean_delta_u = 0.0;
    double margin = 0.0;
    std::optional<Witness> witness;
    bool asymptotic = false;
    SupResult sup;
};

struct VerdictOptions {
    double verdict_tol = 1e-6;
    int grid_n = 512;
    unsigned workers = 1;
    QuadOptions quad;
    int max_pairs = 50;
    double closure_tol = 1e-6;
};

// Left-handed iff the mean swing advance stays below 2 pi by more than the verdict tolerance.
inline Verdict left_handed_verdict(const ProfileSurface& S, const VerdictOptions& o, const LevelScan& sc) {
    Verdict v;
    v.sup = sup_mean_swing(S, sc, o.quad);
    v.sup_mean_delta_u = v.sup.sup;
    v.margin = num::two_pi - v.sup.sup;
    const double threshold = num::two_pi - o.verdict_tol;
    const double uncert = v.sup.at_boundary ? std::max(v.sup.limit.error, 10 * o.quad.rel_tol * v.sup.sup)
                                            : 10 * o.quad.rel_tol * v.sup.sup;
    if (std::abs(v.sup.sup - threshold) <= uncert)
        throw Inconclusive("supremum " + std::to_string(v.sup.sup) + " is within its error bound of the threshold");
    v.status = v.sup.sup < threshold ? VerdictStatus::LeftHanded : VerdictStatus::NotLeftHanded;
    if (v.status == VerdictStatus::NotLeftHanded) {
        const auto lvl = find_closed_geodesic(S, 2, 1, sc, o.quad);
        if (lvl && !lvl->degenerate) {
            const ClosureResult cr = detect_closure(S, lvl->c, std::min(o.max_pairs, 4), o.closure_tol);
            Witness w;
            w.c = lvl->c;
            w.closed = cr.closed;
            w.residual = cr.residual;
            w.crossings = cr.crossings;
            w.period_length = cr.period_length;
            const ClairautLevel L = clairaut_level(S, lvl->c);
            w.turning_s_north = L.turning_s_north;
            w.turning_s_south = L.turning_s_south;
            if (cr.closed) w.type = GeodesicType(cr.p, cr.q);
            v.witness = w;
        }
        v.asymptotic = !v.witness.has_value();
    }
    return v;
}

inline Verdict left_handed_verdict(const ProfileSurface& S, const VerdictOptions& o = {}) {
    if (o.grid_n < 128) throw InvalidInput("verdict grid needs at least 128 levels");
    return left_handed_verdict(S, o, scan_levels(S, o.grid_n, o.workers, o.quad));
}

// Bisection on b of the predicate "equator limit of E_b is below 2 pi".
inline double critical_ellipsoid_b(double tol = 1e-4, QuadOptions opt = {}) {
    if (!(tol >= 1e-6)) throw InvalidInput("critical b tolerance must be at least 1e-6");
    double lo = 1.5, hi = 2.5;
    auto below = [&](double b) { return equator_limit(make_ellipsoid(b), opt).value < num::two_pi; };
    if (!below(lo) || below(hi)) throw NonConvergence("critical b bracket [1.5, 2.5] is not valid");
    while (hi - lo > tol) {
        const double m = 0.5 * (lo + hi);
        (below(m) ? lo : hi) = m;
    }
    return 0.5 * (lo + hi);
}

// Ellipsoid swing through the closed substitution v = sqrt(a) cos t of the quarter integral
// (a = b^2 - 1 > 0). Independent of the generic quadrature; used as a cross-check.
inline double ellipsoid_swing_substituted(double b, double sigma) {
    if (!(b > 1)) throw InvalidInput("substituted ellipsoid form needs b > 1");
    if (!(sigma > 0 && sigma < 1)) throw LevelOutOfRange("level must lie in (0, 1)");
    const double a = b * b - 1, s2 = sigma * sigma;
    auto h = [&](double t) {
        const double ct = std::cos(t), den = a * s2 + (1 - s2) * a * ct * ct;
        return a * sigma * std::sqrt(1 + a * s2 + (1 - s2) * a * ct * ct) / den;
    };
    return 2.0 * num::gauss_adaptive(h, 0.0, num::pi / 2, 1e-14).value;
}

} // namespace revlink
