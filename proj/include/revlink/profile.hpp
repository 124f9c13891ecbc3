#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "numerics.hpp"
#include "spline.hpp"

namespace revlink {

// Profile values and derivatives with respect to the (not necessarily unit-speed) parameter s.
struct ProfileJet {
    double f, g, df, dg, d2f, d2g;
};

struct EquatorInfo {
    double s_e = 0.0;
    double r_e = 0.0;
};

// A sphere of revolution: radius f(s) and height g(s), poles at s_min and s_max.
// Immutable once built; copies share the lazily computed equator.
class ProfileSurface {
public:
    using Eval = std::function<ProfileJet(double)>;

    ProfileSurface(std::string name, std::vector<double> params, double s_min, double s_max, Eval eval)
        : name_(std::move(name)), params_(std::move(params)), s_min_(s_min), s_max_(s_max),
          eval_(std::move(eval)), cache_(std::make_shared<Cache>()) {}

    ProfileJet operator()(double s) const { return eval_(s); }
    double s_min() const { return s_min_; }
    double s_max() const { return s_max_; }
    const std::string& name() const { return name_; }
    const std::vector<double>& params() const { return params_; }

    std::string describe() const {
        std::ostringstream os;
        os << name_;
        for (std::size_t i = 0; i < params_.size(); ++i) os << (i ? "," : "(") << params_[i];
        if (!params_.empty()) os << ")";
        return os.str();
    }

    // Equator, computed once and shared between copies.
    const EquatorInfo& equator() const;

private:
    struct Cache {
        std::once_flag once;
        std::optional<EquatorInfo> eq;
        std::exception_ptr err;
    };
    std::string name_;
    std::vector<double> params_;
    double s_min_, s_max_;
    Eval eval_;
    std::shared_ptr<Cache> cache_;
};

inline double curvature_from_jet(const ProfileJet& j) {
    const double sp = j.df * j.df + j.dg * j.dg;
    return -j.dg * (j.dg * j.d2f - j.d2g * j.df) / (j.f * sp * sp);
}

inline double gaussian_curvature(const ProfileSurface& S, double s, double pole_guard = 1e-9) {
    const ProfileJet j = S(s);
    if (!(s > S.s_min() && s < S.s_max()) || j.f < pole_guard)
        throw PoleProximityError("curvature requested too close to a pole at s=" + std::to_string(s));
    return curvature_from_jet(j);
}

// Limit of K at a pole, where f = g' = 0: K -> g''^2 / f'^4.
inline double pole_curvature(const ProfileSurface& S, bool north) {
    const ProfileJet j = S(north ? S.s_max() : S.s_min());
    const double d = j.df * j.df;
    return j.d2g * j.d2g / (d * d);
}

namespace detail {

inline EquatorInfo compute_equator(const ProfileSurface& S, int grid_n = 512) {
    const double a = S.s_min(), b = S.s_max(), h = (b - a) / grid_n;
    int changes = 0;
    bool maximum = true;
    double lo = a, hi = b;
    double prev_s = a + 0.5 * h, prev = S(prev_s).df;
    for (int i = 1; i < grid_n; ++i) {
        const double s = a + (i + 0.5) * h, d = S(s).df;
        if ((prev > 0) != (d > 0)) {
            ++changes;
            if (prev > 0) {
                lo = prev_s;
                hi = s;
            } else {
                maximum = false;
            }
        }
        prev = d;
        prev_s = s;
    }
    if (changes != 1 || !maximum)
        throw MultipleCriticalPoints("profile radius has " + std::to_string(changes) + " critical points on the grid");
    const double se = num::bisect([&](double s) { return S(s).df; }, lo, hi, 1e-15);
    return {se, S(se).f};
}

} // namespace detail

inline const EquatorInfo& ProfileSurface::equator() const {
    std::call_once(cache_->once, [this] {
        try {
            cache_->eq = detail::compute_equator(*this);
        } catch (...) {
            cache_->err = std::current_exception();
        }
    });
    if (cache_->err) std::rethrow_exception(cache_->err);
    return *cache_->eq;
}

inline EquatorInfo equator(const ProfileSurface& S) { return S.equator(); }

struct CurvatureReport {
    double k_min = 0.0, k_max = 0.0;
    double s_at_min = 0.0, s_at_max = 0.0;
    double delta = 0.0;
};

inline CurvatureReport curvature_report(const ProfileSurface& S, int grid_n = 512) {
    if (grid_n < 64) throw InvalidInput("curvature grid must have at least 64 points");
    const double a = S.s_min(), b = S.s_max(), h = (b - a) / grid_n;
    std::vector<double> ks(grid_n);
    int imin = 0, imax = 0;
    for (int i = 0; i < grid_n; ++i) {
        const double s = a + (i + 0.5) * h;
        ks[i] = gaussian_curvature(S, s);
        if (!(ks[i] > 0)) throw NonPositiveCurvature(s, ks[i]);
        if (ks[i] < ks[imin]) imin = i;
        if (ks[i] > ks[imax]) imax = i;
    }
    auto K = [&](double s) { return gaussian_curvature(S, s); };
    auto cell = [&](int i) {
        const double lo = a + (std::max(i - 1, 0) + 0.5) * h, hi = a + (std::min(i + 1, grid_n - 1) + 0.5) * h;
        return std::pair{lo, hi};
    };
    CurvatureReport r;
    {
        auto [lo, hi] = cell(imin);
        auto e = num::golden_min(K, lo, hi, 1e-12);
        r.k_min = ks[imin];
        r.s_at_min = a + (imin + 0.5) * h;
        if (e.value < r.k_min) {
            r.k_min = e.value;
            r.s_at_min = e.x;
        }
    }
    {
        auto [lo, hi] = cell(imax);
        auto e = num::golden_max(K, lo, hi, 1e-12);
        r.k_max = ks[imax];
        r.s_at_max = a + (imax + 0.5) * h;
        if (e.value > r.k_max) {
            r.k_max = e.value;
            r.s_at_max = e.x;
        }
    }
    for (bool north : {false, true}) {
        const double kp = pole_curvature(S, north);
        if (!std::isfinite(kp)) continue;
        const double sp = north ? b : a;
        if (!(kp > 0)) throw NonPositiveCurvature(sp, kp);
        if (kp > r.k_max) {
            r.k_max = kp;
            r.s_at_max = sp;
        }
        if (kp < r.k_min) {
            r.k_min = kp;
            r.s_at_min = sp;
        }
    }
    r.delta = r.k_min / r.k_max;
    return r;
}

struct ValidationIssue {
    std::string check;
    double s = 0.0;
    std::string detail;
};

struct ValidationReport {
    bool passed = true;
    std::vector<ValidationIssue> issues;
};

inline ValidationReport validate(const ProfileSurface& S, int grid_n = 512) {
    ValidationReport rep;
    auto fail = [&](std::string check, double s, std::string detail) {
        rep.passed = false;
        rep.issues.push_back({std::move(check), s, std::move(detail)});
    };
    grid_n = std::max(grid_n, 16);
    const double a = S.s_min(), b = S.s_max(), h = (b - a) / grid_n;
    double fmax = 0.0;
    std::vector<ProfileJet> jets(grid_n);
    for (int i = 0; i < grid_n; ++i) {
        jets[i] = S(a + (i + 0.5) * h);
        fmax = std::max(fmax, jets[i].f);
    }
    const double end_tol = 1e-8 * std::max(1.0, fmax);
    if (std::abs(S(a).f) > end_tol) fail("pole", a, "f does not vanish at s_min");
    if (std::abs(S(b).f) > end_tol) fail("pole", b, "f does not vanish at s_max");
    // consecutive failing cells are reported as one issue
    int changes = 0;
    int run_start = -1;
    std::string run_check;
    double run_worst = 0.0;
    auto close_run = [&](int end) {
        if (run_start < 0) return;
        const double s0 = a + (run_start + 0.5) * h, s1 = a + (end - 0.5) * h;
        const std::string where = "on [" + std::to_string(s0) + ", " + std::to_string(s1) + "]";
        if (run_check == "radius")
            fail("radius", s0, "f is not positive " + where);
        else
            fail("curvature", s0, "K <= 0 " + where + ", minimum " + std::to_string(run_worst));
        run_start = -1;
    };
    for (int i = 0; i < grid_n; ++i) {
        const ProfileJet& j = jets[i];
        std::string bad;
        double val = 0.0;
        if (!(j.f > 0)) {
            bad = "radius";
        } else {
            val = curvature_from_jet(j);
            if (!(val > 0)) bad = "curvature";
        }
        if (bad != run_check || bad.empty()) close_run(i);
        if (!bad.empty()) {
            if (run_start < 0) {
                run_start = i;
                run_worst = val;
            }
            run_worst = std::min(run_worst, val);
        }
        run_check = bad;
        if (i > 0 && ((jets[i - 1].df > 0) != (j.df > 0))) ++changes;
    }
    close_run(grid_n);
    if (changes != 1) fail("critical_points", a, "f' changes sign " + std::to_string(changes) + " times");
    return rep;
}

inline ProfileSurface make_ellipsoid(double b) {
    if (!(b > 0) || !std::isfinite(b)) throw InvalidInput("ellipsoid axis b must be positive");
    return ProfileSurface("ellipsoid", {b}, -num::pi / 2, num::pi / 2, [b](double v) {
        const double c = std::cos(v), s = std::sin(v);
        return ProfileJet{c, b * s, -s, b * c, -c, -b * s};
    });
}

inline ProfileSurface make_sphere() {
    ProfileSurface e = make_ellipsoid(1.0);
    return ProfileSurface("sphere", {}, e.s_min(), e.s_max(), [](double v) {
        const double c = std::cos(v), s = std::sin(v);
        return ProfileJet{c, s, -s, c, -c, -s};
    });
}

namespace detail {

// Pinched sphere. The curvature is prescribed as a function of the radius phi = f = cos v:
// the ellipsoid E_B law on the equatorial band (B = 1/sqrt(delta)), a constant kappa on the caps,
// and a quintic-smoothstep blend in between. kappa is fixed by smoothness at the poles.
class PinchedProfile {
public:
    PinchedProfile(double delta, double eps) : B2_(1.0 / delta), eps_(eps) {
        phi1_ = std::cos(eps);
        phi2_ = std::cos(2 * eps);
        F1_ = band_F(phi1_);
        const double IEB = num::gauss_panel<32>([&](double x) { return 2 * x * (1 - w(x)) * k_band(x); }, phi2_, phi1_);
        const double Iw = num::gauss_panel<32>([&](double x) { return 2 * x * w(x); }, phi2_, phi1_);
        kappa_ = (1 - F1_ - IEB) / (Iw + phi2_ * phi2_);
        // Height on the transition, tabulated once; it is only used for embedding output.
        const int n = 400;
        std::vector<double> vs(n + 1), gs(n + 1);
        gs[0] = std::sqrt(B2_) * std::sin(eps);
        for (int i = 0; i <= n; ++i) vs[i] = eps + eps * i / n;
        for (int i = 1; i <= n; ++i)
            gs[i] = gs[i - 1] + num::gauss_panel<16>([&](double v) { return dg_trans(v); }, vs[i - 1], vs[i]);
        g_trans_ = CubicSpline(vs, gs, dg_trans(eps), dg_trans(2 * eps));
        g2e_ = gs[n];
    }

    double kappa() const { return kappa_; }

    // Curvature as a function of the radius.
    double K(double phi) const {
        if (phi >= phi1_) return k_band(phi);
        if (phi <= phi2_) return kappa_;
        const double t = w(phi);
        return (1 - t) * k_band(phi) + t * kappa_;
    }

    ProfileJet operator()(double v) const {
        const double phi = std::cos(v), sv = std::sin(v), av = std::abs(v), sg = v < 0 ? -1.0 : 1.0;
        ProfileJet j{phi, 0, -sv, 0, -phi, 0};
        if (phi >= phi1_) {
            const double B = std::sqrt(B2_);
            j.g = B * sv;
            j.dg = B * phi;
            j.d2g = -B * sv;
        } else if (phi <= phi2_) {
            const double k = kappa_, den = 1 - k * phi * phi, rt = std::sqrt(1 - phi * phi);
            j.dg = std::sqrt(k) * phi * rt / std::sqrt(den);
            const double dN = (1 - 2 * phi * phi) / rt, N = phi * rt, D = std::sqrt(den), dD = -k * phi / D;
            j.d2g = -sv * std::sqrt(k) * (dN * D - N * dD) / (D * D);
            j.g = sg * (g2e_ + (std::sqrt(den) - std::sqrt(1 - k * phi2_ * phi2_)) / std::sqrt(k));
        } else {
            const double F = trans_F(phi), P = 1 - F, k = K(phi), om = 1 - phi * phi;
            const double Q = P * om / F;
            const double dP = 2 * k * phi, dF = -2 * k * phi;
            const double dQ = (dP * om - 2 * phi * P) / F - P * om * dF / (F * F);
            j.dg = std::sqrt(Q);
            j.d2g = -sv * dQ / (2 * std::sqrt(Q));
            j.g = sg * g_trans_(av).y;
        }
        return j;
    }

private:
    static double smooth5(double t) {
        t = std::clamp(t, 0.0, 1.0);
        return t * t * t * (10 + t * (-15 + 6 * t));
    }
    double w(double phi) const { return smooth5((phi1_ - phi) / (phi1_ - phi2_)); }
    double k_band(double phi) const {
        const double d = 1 + (B2_ - 1) * phi * phi;
        return B2_ / (d * d);
    }
    double band_F(double phi) const { return (1 - phi * phi) / (1 + (B2_ - 1) * phi * phi); }
    double trans_F(double phi) const {
        return F1_ + num::gauss_panel<24>([&](double x) { return 2 * x * K(x); }, phi, phi1_);
    }
    double dg_trans(double v) const {
        const double phi = std::cos(v), F = trans_F(phi);
        return std::sqrt((1 - F) * (1 - phi * phi) / F);
    }

    double B2_, eps_, phi1_ = 0, phi2_ = 0, F1_ = 0, kappa_ = 1, g2e_ = 0;
    CubicSpline g_trans_;
};

} // namespace detail

inline ProfileSurface make_pinched_sphere(double delta, double eps, double pinch_tol = 1e-2) {
    if (!(delta > 0 && delta <= 1)) throw InvalidInput("delta must lie in (0, 1]");
    if (!(eps > 0 && eps <= 0.15)) throw InvalidInput("eps must lie in (0, 0.15]");
    auto prof = std::make_shared<const detail::PinchedProfile>(delta, eps);
    ProfileSurface S("sdelta", {delta, eps}, -num::pi / 2, num::pi / 2, [prof](double v) { return (*prof)(v); });
    CurvatureReport rep;
    try {
        rep = curvature_report(S, 2048);
    } catch (const NonPositiveCurvature& e) {
        throw ValidationError(std::string("pinched sphere is not convex: ") + e.what() + "; reduce eps");
    }
    if (std::abs(rep.delta - delta) > pinch_tol)
        throw ValidationError("pinched sphere has pinching " + std::to_string(rep.delta) + ", requested " +
                              std::to_string(delta) + "; reduce eps");
    return S;
}

// Cap curvature of the pinched sphere (diagnostic).
inline double pinched_cap_curvature(double delta, double eps) { return detail::PinchedProfile(delta, eps).kappa(); }

struct ProfileSample {
    double s, f, g;
};

inline ProfileSurface from_samples(const std::vector<ProfileSample>& rows, std::string name = "samples") {
    if (rows.size() < 16) throw TooFewSamples("profile needs at least 16 samples, got " + std::to_string(rows.size()));
    std::vector<double> s, f, g;
    double fmax = 0.0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        if (!std::isfinite(r.s) || !std::isfinite(r.f) || !std::isfinite(r.g)) throw FormatError("non-finite sample value");
        if (i > 0 && !(r.s > rows[i - 1].s)) throw FormatError("sample parameter s is not strictly increasing at row " + std::to_string(i));
        fmax = std::max(fmax, r.f);
        s.push_back(r.s);
        f.push_back(r.f);
        g.push_back(r.g);
    }
    const double tol = 1e-9 * std::max(1.0, fmax);
    if (std::abs(f.front()) > tol || std::abs(f.back()) > tol) throw FormatError("radius must vanish at both end samples");
    f.front() = 0.0;
    f.back() = 0.0;
    for (std::size_t i = 1; i + 1 < f.size(); ++i)
        if (!(f[i] > 0)) throw FormatError("radius is not positive at interior row " + std::to_string(i));
    const std::size_t n = s.size();
    auto spline = [&](const std::vector<double>& y) {
        return CubicSpline(s, y, CubicSpline::four_point_slope(s, y, 0, 0), CubicSpline::four_point_slope(s, y, n - 4, n - 1));
    };
    auto sf = std::make_shared<const CubicSpline>(spline(f));
    auto sg = std::make_shared<const CubicSpline>(spline(g));
    return ProfileSurface(std::move(name), {}, s.front(), s.back(), [sf, sg](double t) {
        const SplineValue a = (*sf)(t), b = (*sg)(t);
        return ProfileJet{a.y, b.y, a.dy, b.dy, a.d2y, b.d2y};
    });
}

} // namespace revlink
