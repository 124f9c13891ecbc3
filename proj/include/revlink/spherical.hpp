#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "errors.hpp"
#include "numerics.hpp"

namespace revlink {

struct Vec3 {
    double x = 0, y = 0, z = 0;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double k) const { return {x * k, y * k, z * k}; }
    Vec3 operator-() const { return {-x, -y, -z}; }
    bool operator==(const Vec3&) const = default;
};

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(const Vec3& a, const Vec3& b) { return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x}; }
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
inline Vec3 normalized(const Vec3& a) {
    const double n = norm(a);
    if (!(n > 0) || !std::isfinite(n)) throw InvalidInput("cannot normalize a zero or non-finite vector");
    return a * (1.0 / n);
}
// Great-circle distance between unit vectors.
inline double angle_between(const Vec3& a, const Vec3& b) { return std::atan2(norm(cross(a, b)), dot(a, b)); }

inline Vec3 slerp(const Vec3& a, const Vec3& b, double t) {
    const double w = angle_between(a, b);
    if (w < 1e-12) return normalized(a * (1 - t) + b * t);
    const double s = std::sin(w);
    return normalized(a * (std::sin((1 - t) * w) / s) + b * (std::sin(t * w) / s));
}

// Rodrigues rotation about a unit axis.
inline Vec3 rotate(const Vec3& v, const Vec3& axis, double angle) {
    const double c = std::cos(angle), s = std::sin(angle);
    return v * c + cross(axis, v) * s + axis * (dot(axis, v) * (1 - c));
}

inline Vec3 from_lat_lon(double lat, double lon) {
    return {std::cos(lat) * std::cos(lon), std::cos(lat) * std::sin(lon), std::sin(lat)};
}

struct ArcHit {
    Vec3 point;
    int sign = 0; // > 0 when (tangent ab, tangent cd) is positively oriented seen from outside
};

// Transverse intersection of the minor arcs ab and cd with unit normals n1 = ab, n2 = cd.
// Throws DegeneracyError when an endpoint touches the other arc or the arcs are tangent.
inline std::optional<ArcHit> arc_crossing(const Vec3& a, const Vec3& b, const Vec3& n1, const Vec3& c, const Vec3& d,
                                          const Vec3& n2) {
    constexpr double eps = 1e-12;
    auto near_arc = [](const Vec3& p, const Vec3& s0, const Vec3& s1, const Vec3& n) {
        if (std::abs(dot(n, p)) > eps) return false;
        return dot(cross(s0, p), n) >= -eps && dot(cross(p, s1), n) >= -eps && dot(p, s0 + s1) > 0;
    };
    if (near_arc(c, a, b, n1) || near_arc(d, a, b, n1) || near_arc(a, c, d, n2) || near_arc(b, c, d, n2))
        throw DegeneracyError("a vertex lies on another edge");
    const double da = dot(n2, a), db = dot(n2, b), dc = dot(n1, c), dd = dot(n1, d);
    if ((dc > 0) == (dd > 0) || (da > 0) == (db > 0)) return std::nullopt;
    Vec3 X = cross(n1, n2);
    const double xl = norm(X);
    if (xl < 1e-10) throw DegeneracyError("edges meet tangentially");
    X = X * (1.0 / xl);
    if (dot(X, a + b) < 0) X = -X;
    if (dot(X, c + d) <= 0) return std::nullopt;
    return ArcHit{X, dot(X, cross(cross(n1, X), cross(n2, X))) > 0 ? 1 : -1};
}

// Closed oriented polyline of unit vectors joined by minor great-circle arcs.
class SphericalCurve {
public:
    SphericalCurve() = default;
    explicit SphericalCurve(const std::vector<Vec3>& pts) {
        for (const Vec3& p : pts) {
            const Vec3 u = normalized(p);
            if (!v_.empty() && angle_between(v_.back(), u) < 1e-13) continue;
            v_.push_back(u);
        }
        while (v_.size() > 1 && angle_between(v_.back(), v_.front()) < 1e-13) v_.pop_back();
        if (v_.size() < 3) throw InvalidInput("a spherical curve needs at least 3 distinct vertices");
        const std::size_t n = v_.size();
        cum_.assign(n + 1, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const Vec3 &a = v_[i], &b = v_[(i + 1) % n];
            if (dot(a, b) < -1 + 1e-12) throw InvalidInput("consecutive vertices are antipodal");
            cum_[i + 1] = cum_[i] + angle_between(a, b);
        }
    }

    std::size_t size() const { return v_.size(); }
    const std::vector<Vec3>& vertices() const { return v_; }
    const Vec3& operator[](std::size_t i) const { return v_[i]; }
    const Vec3& edge_start(std::size_t i) const { return v_[i]; }
    const Vec3& edge_end(std::size_t i) const { return v_[(i + 1) % v_.size()]; }
    double edge_length(std::size_t i) const { return cum_[i + 1] - cum_[i]; }
    double length() const { return cum_.back(); }
    double vertex_position(std::size_t i) const { return cum_[i]; }
    double position(std::size_t edge, double t) const { return cum_[edge] + t * edge_length(edge); }

    // Point at arclength position (taken modulo the length).
    Vec3 point_at(double pos) const {
        const double L = length();
        pos = std::fmod(pos, L);
        if (pos < 0) pos += L;
        std::size_t i = static_cast<std::size_t>(std::upper_bound(cum_.begin(), cum_.end(), pos) - cum_.begin());
        i = std::clamp<std::size_t>(i, 1, v_.size()) - 1;
        const double el = edge_length(i);
        return slerp(edge_start(i), edge_end(i), el > 0 ? (pos - cum_[i]) / el : 0.0);
    }

    SphericalCurve reversed() const {
        std::vector<Vec3> r(v_.rbegin(), v_.rend());
        return SphericalCurve(r);
    }

    SphericalCurve rotated(const Vec3& axis, double angle) const {
        std::vector<Vec3> r;
        const Vec3 ax = normalized(axis);
        for (const auto& p : v_) r.push_back(rotate(p, ax, angle));
        return SphericalCurve(r);
    }

    // Same geometric curve with every edge split at its midpoint.
    SphericalCurve subdivided() const {
        std::vector<Vec3> r;
        for (std::size_t i = 0; i < v_.size(); ++i) {
            r.push_back(v_[i]);
            r.push_back(slerp(edge_start(i), edge_end(i), 0.5));
        }
        return SphericalCurve(r);
    }

    // Signed turning angle at vertex i (positive = left turn seen from outside).
    double turning_angle(std::size_t i) const {
        const std::size_t n = v_.size();
        const Vec3 &p = v_[(i + n - 1) % n], &c = v_[i], &q = v_[(i + 1) % n];
        const Vec3 tin = cross(cross(p, c), c), tout = cross(cross(c, q), c);
        return std::atan2(dot(c, cross(tin, tout)), dot(tin, tout));
    }

    // Is P in the region to the left of this (simple) curve?
    bool left_of(const Vec3& P) const;

    // Great-circle distance from P to the polyline.
    double distance_to(const Vec3& P) const {
        double best = num::pi;
        const std::size_t n = v_.size();
        for (std::size_t i = 0; i < n; ++i) {
            const Vec3 &a = v_[i], &b = v_[(i + 1) % n];
            best = std::min({best, angle_between(P, a), angle_between(P, b)});
            const Vec3 nn = cross(a, b);
            const double nl = norm(nn);
            if (nl < 1e-15) continue;
            const Vec3 nh = nn * (1.0 / nl);
            const Vec3 proj = P - nh * dot(P, nh);
            if (norm(proj) < 1e-15) continue;
            const Vec3 F = normalized(proj);
            if (dot(cross(a, F), nh) >= 0 && dot(cross(F, b), nh) >= 0) best = std::min(best, std::abs(std::asin(std::clamp(dot(P, nh), -1.0, 1.0))));
        }
        return best;
    }

private:
    std::vector<Vec3> v_;
    std::vector<double> cum_;
};

// Parity test: walk from a point just left of an edge midpoint to P and count crossings.
inline bool SphericalCurve::left_of(const Vec3& P) const {
    const std::size_t n = v_.size();
    for (std::size_t k = 0; k < 7; ++k) {
        const std::size_t e = (k * n) / 7 % n;
        const Vec3 &a = v_[e], &b = v_[(e + 1) % n];
        const Vec3 nrm = normalized(cross(a, b));
        const double off = std::min(1e-9, 1e-3 * edge_length(e));
        const Vec3 R = normalized(normalized(a + b) + nrm * off);
        if (angle_between(R, P) < 1e-12) continue;
        try {
            // long walks go through a waypoint 90 degrees from R
            std::vector<Vec3> path{R};
            if (dot(R, P) < 0) {
                Vec3 w = cross(cross(R, P), R);
                if (norm(w) < 1e-6) w = cross(R, std::abs(R.x) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0});
                path.push_back(normalized(w));
            }
            path.push_back(P);
            int hits = 0;
            for (std::size_t h = 0; h + 1 < path.size(); ++h) {
                const Vec3 m = normalized(cross(path[h], path[h + 1]));
                for (std::size_t i = 0; i < n; ++i) {
                    const Vec3 &c = v_[i], &d = v_[(i + 1) % n];
                    if (arc_crossing(path[h], path[h + 1], m, c, d, normalized(cross(c, d)))) ++hits;
                }
            }
            return hits % 2 == 0;
        } catch (const DegeneracyError&) {
        }
    }
    throw DegeneracyError("could not decide the side of a point");
}

struct MultiCurve {
    std::vector<SphericalCurve> components;
};

// Latitude circle at `lat`, traversed eastward (sign > 0) or westward.
inline SphericalCurve latitude_circle(double lat, int sign, int n = 720, double lon0 = 0.0) {
    std::vector<Vec3> pts;
    for (int i = 0; i < n; ++i) pts.push_back(from_lat_lon(lat, lon0 + sign * num::two_pi * i / n));
    return SphericalCurve(pts);
}

} // namespace revlink
