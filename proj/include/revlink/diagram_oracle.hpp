#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "clairaut_map.hpp"
#include "errors.hpp"
#include "geodesic_ode.hpp"
#include "half_int.hpp"
#include "linking_calculus.hpp"
#include "profile.hpp"
#include "spherical.hpp"

namespace revlink {

struct ArcPosition {
    std::size_t edge = 0;
    double t = 0.0;   // fraction along the edge
    double pos = 0.0; // arclength from vertex 0
};

// Transverse crossing; sign > 0 when (tangent1, tangent2) is positively oriented seen from outside.
struct Crossing {
    Vec3 point;
    ArcPosition first, second;
    int sign = 0;
};

namespace detail {

struct EdgeCache {
    std::vector<Vec3> normal, mid;
    std::vector<double> half;
};

inline EdgeCache edge_cache(const SphericalCurve& c) {
    EdgeCache e;
    for (std::size_t i = 0; i < c.size(); ++i) {
        const Vec3 &a = c.edge_start(i), &b = c.edge_end(i);
        e.normal.push_back(normalized(cross(a, b)));
        e.mid.push_back(normalized(a + b));
        e.half.push_back(0.5 * c.edge_length(i));
    }
    return e;
}

// Intersection of edge i of A and edge j of B.
inline std::optional<Crossing> edge_crossing(const SphericalCurve& A, std::size_t i, const EdgeCache& ea,
                                             const SphericalCurve& B, std::size_t j, const EdgeCache& eb) {
    const double reach = ea.half[i] + eb.half[j] + 1e-9;
    if (reach < num::pi && dot(ea.mid[i], eb.mid[j]) < std::cos(reach)) return std::nullopt;
    const Vec3 &a = A.edge_start(i), &c = B.edge_start(j);
    const auto hit = arc_crossing(a, A.edge_end(i), ea.normal[i], c, B.edge_end(j), eb.normal[j]);
    if (!hit) return std::nullopt;
    const Vec3 X = hit->point;
    Crossing cr;
    cr.point = X;
    const double t1 = A.edge_length(i) > 0 ? angle_between(a, X) / A.edge_length(i) : 0.0;
    const double t2 = B.edge_length(j) > 0 ? angle_between(c, X) / B.edge_length(j) : 0.0;
    cr.first = {i, t1, A.position(i, t1)};
    cr.second = {j, t2, B.position(j, t2)};
    cr.sign = hit->sign;
    return cr;
}

} // namespace detail

// Crossings between two curves, sorted along the first.
inline std::vector<Crossing> intersections(const SphericalCurve& A, const SphericalCurve& B) {
    const auto ea = detail::edge_cache(A), eb = detail::edge_cache(B);
    std::vector<Crossing> out;
    for (std::size_t i = 0; i < A.size(); ++i)
        for (std::size_t j = 0; j < B.size(); ++j)
            if (auto c = detail::edge_crossing(A, i, ea, B, j, eb)) out.push_back(*c);
    std::sort(out.begin(), out.end(), [](const Crossing& x, const Crossing& y) { return x.first.pos < y.first.pos; });
    return out;
}

// Double points of one curve; `first` is the earlier passage.
inline std::vector<Crossing> self_intersections(const SphericalCurve& A) {
    const auto ea = detail::edge_cache(A);
    const std::size_t n = A.size();
    std::vector<Crossing> out;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 2; j < n; ++j) {
            if (i == 0 && j == n - 1) continue;
            if (auto c = detail::edge_crossing(A, i, ea, A, j, ea)) out.push_back(*c);
        }
    std::sort(out.begin(), out.end(), [](const Crossing& x, const Crossing& y) { return x.first.pos < y.first.pos; });
    return out;
}

inline bool is_simple(const SphericalCurve& A) { return self_intersections(A).empty(); }

struct SmoothingReport {
    MultiCurve result;
    std::size_t crossings = 0;
    double radius = 0.0;
    int attempts = 0;
};

namespace detail {

struct DoublePoint {
    Vec3 X;
    std::size_t comp[2];
    double pos[2];
};

struct Pass {
    double pos;
    std::size_t x;
    int strand;
};

inline std::size_t count_crossings(const MultiCurve& a, const MultiCurve& b) {
    std::size_t n = 0;
    for (const auto& ca : a.components)
        for (const auto& cb : b.components) n += intersections(ca, cb).size();
    return n;
}

// One reconnection pass at disc radius r.
inline MultiCurve smooth_at_radius(const MultiCurve& mc, const std::vector<DoublePoint>& xs,
                                   const std::vector<std::vector<Pass>>& passes, double r) {
    std::vector<std::vector<Vec3>> piece_pts;
    std::vector<std::size_t> entry; // pass key at the end of each piece
    std::vector<std::size_t> exit_piece(2 * xs.size(), 0);
    MultiCurve out;
    for (std::size_t a = 0; a < mc.components.size(); ++a) {
        const auto& C = mc.components[a];
        const auto& ps = passes[a];
        if (ps.empty()) {
            out.components.push_back(C);
            continue;
        }
        const double L = C.length();
        const std::size_t n = C.size();
        for (std::size_t k = 0; k < ps.size(); ++k) {
            const Pass& P = ps[k];
            const Pass& Q = ps[(k + 1) % ps.size()];
            double start = P.pos + r, end = Q.pos - r;
            if (k + 1 == ps.size()) end += L;
            if (start >= L) {
                start -= L;
                end -= L;
            }
            if (!(end > start)) throw DegeneracyError("smoothing discs overlap along a strand");
            std::vector<Vec3> pts{C.point_at(start)};
            for (std::size_t idx = 0; idx < 2 * n; ++idx) {
                const double vp = C.vertex_position(idx % n) + (idx >= n ? L : 0.0);
                if (vp > start + 1e-15 && vp < end - 1e-15) pts.push_back(C[idx % n]);
            }
            pts.push_back(C.point_at(end));
            exit_piece[2 * P.x + P.strand] = piece_pts.size();
            entry.push_back(2 * Q.x + Q.strand);
            piece_pts.push_back(std::move(pts));
        }
    }
    std::vector<bool> used(piece_pts.size(), false);
    for (std::size_t s = 0; s < piece_pts.size(); ++s) {
        if (used[s]) continue;
        std::vector<Vec3> comp;
        std::size_t cur = s;
        while (!used[cur]) {
            used[cur] = true;
            comp.insert(comp.end(), piece_pts[cur].begin(), piece_pts[cur].end());
            const std::size_t key = entry[cur];
            cur = exit_piece[key ^ 1u];
        }
        if (cur != s) throw OracleError("smoothing produced an inconsistent reconnection");
        try {
            out.components.emplace_back(comp);
        } catch (const InvalidInput&) {
            throw DegeneracyError("smoothed component is degenerate");
        }
    }
    return out;
}

} // namespace detail

// Oriented (Seifert) smoothing of every double point, including crossings between components.
// The result consists of simple pairwise disjoint curves. Smoothing discs avoid `obstacle`.
inline SmoothingReport seifert_smooth_report(const MultiCurve& mc, const MultiCurve* obstacle = nullptr,
                                             double r_floor = 1e-7) {
    std::vector<detail::DoublePoint> xs;
    const auto& C = mc.components;
    for (std::size_t a = 0; a < C.size(); ++a) {
        for (const auto& c : self_intersections(C[a])) xs.push_back({c.point, {a, a}, {c.first.pos, c.second.pos}});
        for (std::size_t b = a + 1; b < C.size(); ++b)
            for (const auto& c : intersections(C[a], C[b])) xs.push_back({c.point, {a, b}, {c.first.pos, c.second.pos}});
    }
    SmoothingReport rep;
    rep.crossings = xs.size();
    if (xs.empty()) {
        rep.result = mc;
        return rep;
    }
    std::vector<std::vector<detail::Pass>> passes(C.size());
    for (std::size_t x = 0; x < xs.size(); ++x)
        for (int s = 0; s < 2; ++s) passes[xs[x].comp[s]].push_back({xs[x].pos[s], x, s});
    double r = 0.02;
    for (std::size_t a = 0; a < C.size(); ++a) {
        auto& ps = passes[a];
        std::sort(ps.begin(), ps.end(), [](const auto& p, const auto& q) { return p.pos < q.pos; });
        for (std::size_t k = 0; k < ps.size(); ++k) {
            const double gap = k + 1 < ps.size() ? ps[k + 1].pos - ps[k].pos : C[a].length() - ps[k].pos + ps[0].pos;
            r = std::min(r, 0.3 * gap);
        }
    }
    for (std::size_t i = 0; i < xs.size(); ++i)
        for (std::size_t j = i + 1; j < xs.size(); ++j) r = std::min(r, 0.3 * angle_between(xs[i].X, xs[j].X));
    if (obstacle)
        for (const auto& x : xs)
            for (const auto& oc : obstacle->components) r = std::min(r, 0.3 * oc.distance_to(x.X));
    if (r < 1e-9) throw DegeneracyError("double points too close to each other or to the other curve");
    const std::size_t obstacle_count = obstacle ? detail::count_crossings(mc, *obstacle) : 0;
    for (; r >= r_floor; r *= 0.5) {
        ++rep.attempts;
        try {
            MultiCurve out = detail::smooth_at_radius(mc, xs, passes, r);
            bool ok = true;
            for (std::size_t a = 0; ok && a < out.components.size(); ++a) {
                ok = is_simple(out.components[a]);
                for (std::size_t b = a + 1; ok && b < out.components.size(); ++b)
                    ok = intersections(out.components[a], out.components[b]).empty();
            }
            if (ok && obstacle) ok = detail::count_crossings(out, *obstacle) == obstacle_count;
            if (ok) {
                rep.result = std::move(out);
                rep.radius = r;
                return rep;
            }
        } catch (const DegeneracyError&) {
        }
    }
    throw OracleError("Seifert smoothing failed: disc radius fell below the floor");
}

inline MultiCurve seifert_smooth(const MultiCurve& mc, const MultiCurve* obstacle = nullptr) {
    return seifert_smooth_report(mc, obstacle).result;
}

inline MultiCurve seifert_smooth(const SphericalCurve& c) { return seifert_smooth(MultiCurve{{c}}); }

struct PairReduction {
    HalfInt lk;
    std::size_t crossings = 0;
    int removals = 0;
    int noncoherent = 0;
    bool meander_free = false;
};

// Linking of the tangent lifts of two simple curves. Bigons are removed one at a time by
// second Reidemeister moves; a bigon whose boundary orientations disagree costs one unit.
inline PairReduction lk_simple_pair(const SphericalCurve& A, const SphericalCurve& B) {
    PairReduction res;
    const auto xs = intersections(A, B);
    const std::size_t n = xs.size();
    res.crossings = n;
    if (n % 2) throw OracleError("odd number of crossings between closed curves");
    if (n == 0) {
        const bool eps_a = !A.left_of(B[0]); // B right of A
        const bool eps_b = !B.left_of(A[0]); // A right of B
        res.lk = lk_disjoint_simple(eps_a != eps_b);
        return res;
    }
    std::vector<std::size_t> orderB(n);
    std::iota(orderB.begin(), orderB.end(), 0);
    std::sort(orderB.begin(), orderB.end(), [&](std::size_t i, std::size_t j) { return xs[i].second.pos < xs[j].second.pos; });
    std::vector<std::size_t> nextA(n), prevA(n), nextB(n), prevB(n), rankB(n);
    for (std::size_t i = 0; i < n; ++i) {
        nextA[i] = (i + 1) % n;
        prevA[(i + 1) % n] = i;
        nextB[orderB[i]] = orderB[(i + 1) % n];
        prevB[orderB[(i + 1) % n]] = orderB[i];
        rankB[orderB[i]] = i;
    }
    // true = Right. A's arc after a positive crossing is right of B; B's is left of A.
    std::vector<bool> sideA(n), sideB(n);
    for (std::size_t i = 0; i < n; ++i) {
        sideA[i] = xs[i].sign > 0;
        sideB[i] = xs[i].sign < 0;
        if (xs[i].sign == xs[nextA[i]].sign) throw OracleError("crossing signs do not alternate along a simple curve");
    }
    bool same = true, rev = true;
    for (std::size_t i = 0; i < n; ++i) {
        same = same && rankB[nextA[i]] == (rankB[i] + 1) % n;
        rev = rev && rankB[nextA[i]] == (rankB[i] + n - 1) % n;
    }
    std::vector<bool> alive(n, true);
    std::size_t m = n;
    auto unlink = [&](std::size_t x) {
        nextA[prevA[x]] = nextA[x];
        prevA[nextA[x]] = prevA[x];
        nextB[prevB[x]] = nextB[x];
        prevB[nextB[x]] = prevB[x];
        alive[x] = false;
    };
    while (m > 2) {
        bool found = false;
        for (std::size_t x = 0; x < n && !found; ++x) {
            if (!alive[x]) continue;
            const std::size_t y = nextA[x];
            if (nextB[x] == y) {
                ++res.noncoherent;
            } else if (nextB[y] != x) {
                continue;
            }
            unlink(x);
            unlink(y);
            m -= 2;
            ++res.removals;
            found = true;
        }
        if (!found) throw OracleError("no removable bigon found");
    }
    std::size_t x = 0;
    while (!alive[x]) ++x;
    const std::size_t y = nextA[x];
    ++res.noncoherent;
    ++res.removals;
    const bool eps_a = sideB[y]; // B' right of A
    const bool eps_b = sideA[y]; // A right of B'
    res.lk = lk_disjoint_simple(eps_a != eps_b) - HalfInt::from_int(res.noncoherent);
    if (same || rev) {
        res.meander_free = true;
        const HalfInt fast = lk_meander_free(static_cast<int>(n / 2), same);
        if (fast != res.lk) throw OracleError("meander-free closed form disagrees with the reduction");
    }
    return res;
}

struct LkOptions {
    int max_retries = 8;
    double perturb_angle = 1e-5;
    bool force_perturbation = false;
};

struct LkReport {
    HalfInt lk;
    std::size_t components_first = 0, components_second = 0;
    std::size_t crossings = 0;
    int removals = 0;
    int noncoherent = 0;
    int perturbations = 0;
    double applied_angle = 0.0;
};

inline MultiCurve rotated(const MultiCurve& m, const Vec3& axis, double angle) {
    MultiCurve r;
    for (const auto& c : m.components) r.components.push_back(c.rotated(axis, angle));
    return r;
}

// Linking number of the tangent lifts of two curve systems, computed from their diagrams.
inline LkReport lk_lifted_report(const MultiCurve& A, const MultiCurve& B, const LkOptions& opt = {}) {
    if (A.components.empty() || B.components.empty()) throw InvalidInput("linking needs two non-empty curve systems");
    const Vec3 axis = normalized({0.267, 0.534, 0.802});
    const int first = opt.force_perturbation ? 1 : 0;
    for (int k = first; k <= opt.max_retries + first; ++k) {
        const double ang = k == 0 ? 0.0 : opt.perturb_angle * std::ldexp(1.0, -(k - 1));
        try {
            const MultiCurve Bk = k == 0 ? B : rotated(B, axis, ang);
            const MultiCurve As = seifert_smooth(A, &Bk);
            const MultiCurve Bs = seifert_smooth(Bk, &A);
            LkReport rep;
            rep.components_first = As.components.size();
            rep.components_second = Bs.components.size();
            rep.perturbations = k;
            rep.applied_angle = ang;
            for (const auto& a : As.components)
                for (const auto& b : Bs.components) {
                    const auto pr = lk_simple_pair(a, b);
                    rep.lk += pr.lk;
                    rep.crossings += pr.crossings;
                    rep.removals += pr.removals;
                    rep.noncoherent += pr.noncoherent;
                }
            return rep;
        } catch (const DegeneracyError&) {
        }
    }
    throw DegeneracyError("could not bring the diagram into general position");
}

inline HalfInt lk_lifted(const MultiCurve& A, const MultiCurve& B, const LkOptions& opt = {}) {
    return lk_lifted_report(A, B, opt).lk;
}

inline HalfInt lk_lifted(const SphericalCurve& a, const SphericalCurve& b, const LkOptions& opt = {}) {
    return lk_lifted(MultiCurve{{a}}, MultiCurve{{b}}, opt);
}

// ---- sampling closed geodesics as spherical diagrams ----

// Diffeomorphism from the surface to the unit sphere: longitude kept, s mapped to latitude
// piecewise linearly with the equator going to latitude 0.
inline Vec3 surface_to_sphere(const ProfileSurface& S, double u, double s) {
    const double se = S.equator().s_e;
    const double lat = s >= se ? 0.5 * num::pi * (s - se) / (S.s_max() - se) : 0.5 * num::pi * (s - se) / (se - S.s_min());
    return from_lat_lon(lat, u);
}

struct SampledGeodesic {
    SphericalCurve curve;
    GeodesicType type;
    double c = 0.0;
    ClosureResult closure;
};

// Closed geodesic at level c (0 for a meridian) launched northward at longitude u0.
// Samples sit at half steps so no vertex lands on an equator crossing or a pole.
inline SampledGeodesic sample_closed_geodesic(const ProfileSurface& S, double c, int pts_per_swing = 120, double u0 = 0.0,
                                              int max_pairs = 50, double closure_tol = 1e-8) {
    if (pts_per_swing < 8) throw InvalidInput("need at least 8 points per swing");
    SampledGeodesic g;
    g.c = c;
    if (c == 0.0) {
        std::vector<Vec3> pts;
        const int N = 2 * pts_per_swing;
        for (int i = 0; i < N; ++i) {
            const double th = num::two_pi * (i + 0.5) / N;
            pts.push_back({std::cos(th) * std::cos(u0), std::cos(th) * std::sin(u0), std::sin(th)});
        }
        g.curve = SphericalCurve(pts);
        g.type = GeodesicType(0, 1);
        g.closure = {true, 0, 1, 0.0, 0.0, 2};
        return g;
    }
    g.closure = detect_closure(S, c, max_pairs, closure_tol);
    if (!g.closure.closed)
        throw NonConvergence("level does not close within " + std::to_string(max_pairs) + " crossing pairs (residual " +
                             std::to_string(g.closure.residual) + ")");
    g.type = GeodesicType(g.closure.p, g.closure.q);
    const auto N = static_cast<std::size_t>(2 * g.closure.q * pts_per_swing);
    const auto states = sample_orbit(S, equator_launch(S, c, true, u0), g.closure.period_length, N, 0.5);
    std::vector<Vec3> pts;
    for (const auto& x : states) pts.push_back(surface_to_sphere(S, x.u, x.s));
    g.curve = SphericalCurve(pts);
    return g;
}

// Latitude for a pushed-off equator: below every northern turning point and away from double points.
inline double choose_equator_latitude(const std::vector<SphericalCurve>& curves) {
    double lim = 0.5;
    std::vector<double> bad;
    for (const auto& c : curves) {
        const std::size_t n = c.size();
        for (std::size_t i = 0; i < n; ++i) {
            const double z = c[i].z, zp = c[(i + n - 1) % n].z, zn = c[(i + 1) % n].z;
            if (z > 0 && z >= zp && z >= zn) lim = std::min(lim, std::asin(std::min(1.0, z)));
        }
        for (const auto& x : self_intersections(c)) bad.push_back(std::asin(std::clamp(x.point.z, -1.0, 1.0)));
    }
    std::vector<double> marks{0.0, lim};
    for (double b : bad)
        if (b > 0 && b < lim) marks.push_back(b);
    std::sort(marks.begin(), marks.end());
    double best_gap = -1, lat = 0.5 * lim;
    for (std::size_t i = 0; i + 1 < marks.size(); ++i)
        if (marks[i + 1] - marks[i] > best_gap) {
            best_gap = marks[i + 1] - marks[i];
            lat = 0.5 * (marks[i] + marks[i + 1]);
        }
    if (!(lat > 0)) throw DegeneracyError("no room to push the equator off the diagram");
    return lat;
}

inline SphericalCurve pushed_equator(EquatorOrientation e, double lat, int n = 720) {
    return latitude_circle(lat, e == EquatorOrientation::Plus ? 1 : -1, n);
}

inline HalfInt lk_oracle_equator(const SphericalCurve& g, EquatorOrientation e, const LkOptions& opt = {}) {
    const double lat = choose_equator_latitude({g});
    return lk_lifted(g, pushed_equator(e, lat), opt);
}

// ---- sweep over realizable types ----

struct RealizedType {
    GeodesicType type;
    double c = 0.0;
};

// Types (p, q) with |p| <= max_p, q <= max_q that occur as closed geodesics, both orientations,
// plus the meridian (0, 1).
inline std::vector<RealizedType> realizable_types(const ProfileSurface& S, const LevelScan& sc, int max_p, int max_q,
                                                  QuadOptions opt = {}) {
    std::vector<RealizedType> out{{GeodesicType(0, 1), 0.0}};
    for (int q = 1; q <= max_q; ++q)
        for (int p = 1; p <= max_p; ++p) {
            if (std::gcd(p, q) != 1) continue;
            const auto lvl = find_closed_geodesic(S, p, q, sc, opt);
            if (!lvl) continue;
            out.push_back({GeodesicType(p, q), lvl->c});
            out.push_back({GeodesicType(-p, q), -lvl->c});
        }
    return out;
}

struct OracleRow {
    std::string type1, type2;
    HalfInt formula, oracle;
    bool match = false;
    MultiCurve diagram; // the two curves compared
};

struct OracleOptions {
    int max_p = 6;
    int max_q = 3;
    int grid_n = 512;
    unsigned workers = 1;
    QuadOptions quad;
    int pts_per_swing = 120;
    double second_phase = 0.7; // longitude offset of the second geodesic in a pair
    LkOptions lk;
};

inline std::string type_label(const GeodesicType& t) { return std::to_string(t.p) + ":" + std::to_string(t.q); }

inline std::vector<OracleRow> oracle_sweep(const ProfileSurface& S, const OracleOptions& o, const LevelScan& sc) {
    const auto types = realizable_types(S, sc, o.max_p, o.max_q, o.quad);
    const std::size_t nt = types.size();
    std::vector<SampledGeodesic> g0(nt), g1(nt);
    for (std::size_t i = 0; i < nt; ++i) {
        g0[i] = sample_closed_geodesic(S, types[i].c, o.pts_per_swing, 0.0);
        g1[i] = sample_closed_geodesic(S, types[i].c, o.pts_per_swing, o.second_phase);
        if (!(g0[i].type == types[i].type))
            throw OracleError("level for " + types[i].type.str() + " closes as " + g0[i].type.str());
    }
    struct Job {
        std::string l1, l2;
        HalfInt formula;
        MultiCurve diagram;
    };
    std::vector<Job> jobs;
    for (std::size_t i = 0; i < nt; ++i) {
        const double lat = choose_equator_latitude({g0[i].curve});
        for (auto e : {EquatorOrientation::Plus, EquatorOrientation::Minus})
            jobs.push_back({to_string(e), type_label(types[i].type), lk_equator_geodesic(types[i].type, e),
                            MultiCurve{{g0[i].curve, pushed_equator(e, lat)}}});
    }
    jobs.push_back({"e+", "e-", lk_disjoint_simple(false),
                    MultiCurve{{pushed_equator(EquatorOrientation::Plus, 0.1), pushed_equator(EquatorOrientation::Minus, -0.1)}}});
    for (std::size_t i = 0; i < nt; ++i)
        for (std::size_t j = 0; j < nt; ++j) {
            const double a = std::abs(types[i].c), b = std::abs(types[j].c);
            const bool meridians = types[i].type.p == 0 && types[j].type.p == 0;
            if (!(a > b) && !(meridians && i == j)) continue;
            jobs.push_back({type_label(types[i].type), type_label(types[j].type), lk_two_geodesics(types[i].type, types[j].type, true),
                            MultiCurve{{g0[i].curve, g1[j].curve}}});
        }
    const auto vals = num::parallel_map<HalfInt>(jobs.size(), o.workers, [&](std::size_t k) {
        return lk_lifted(jobs[k].diagram.components[0], jobs[k].diagram.components[1], o.lk);
    });
    std::vector<OracleRow> rows;
    for (std::size_t k = 0; k < jobs.size(); ++k)
        rows.push_back({jobs[k].l1, jobs[k].l2, jobs[k].formula, vals[k], jobs[k].formula == vals[k], std::move(jobs[k].diagram)});
    return rows;
}

inline std::vector<OracleRow> oracle_sweep(const ProfileSurface& S, const OracleOptions& o = {}) {
    return oracle_sweep(S, o, scan_levels(S, o.grid_n, o.workers, o.quad));
}

} // namespace revlink
