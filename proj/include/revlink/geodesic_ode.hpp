#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <ostream>
#include <vector>

#include <boost/numeric/odeint.hpp>

#include "errors.hpp"
#include "numerics.hpp"
#include "profile.hpp"

namespace revlink {

// Geodesic in revolution coordinates; time is arclength.
struct GeodesicState {
    double u = 0.0, s = 0.0, du = 0.0, ds = 0.0;
};

enum class Direction { SouthToNorth, NorthToSouth };

struct CrossingEvent {
    double t = 0.0;
    double u = 0.0; // unwrapped longitude
    Direction direction = Direction::SouthToNorth;
    GeodesicState state;
};

struct TrajectoryPoint {
    double t = 0.0;
    GeodesicState x;
};

struct Drift {
    double clairaut = 0.0; // max |f^2 du - c0|
    double speed = 0.0;    // max |speed^2 - 1|
};

struct Trajectory {
    std::vector<TrajectoryPoint> points;
    std::vector<CrossingEvent> crossings;
    Drift drift;
    double t_end = 0.0;
    GeodesicState final_state;
};

struct IntegrateOptions {
    double tol = 1e-10;
    bool record = true;
    // Abort with a timeout error when no equator crossing occurs for this long.
    double max_crossing_gap = std::numeric_limits<double>::infinity();
    // Called at each crossing; returning true stops the integration there.
    std::function<bool(const CrossingEvent&)> on_crossing;
};

inline double clairaut_constant(const ProfileSurface& S, const GeodesicState& x) {
    const double f = S(x.s).f;
    return f * f * x.du;
}

inline double speed_squared(const ProfileSurface& S, const GeodesicState& x) {
    const ProfileJet j = S(x.s);
    return (j.df * j.df + j.dg * j.dg) * x.ds * x.ds + j.f * j.f * x.du * x.du;
}

// Unit-speed state on the equator at longitude u0 with Clairaut constant c.
inline GeodesicState equator_launch(const ProfileSurface& S, double c, bool northward = true, double u0 = 0.0) {
    const EquatorInfo eq = S.equator();
    if (!(std::abs(c) <= eq.r_e)) throw LevelOutOfRange("Clairaut level outside [-r_e, r_e]");
    const ProfileJet j = S(eq.s_e);
    const double J = std::sqrt(j.df * j.df + j.dg * j.dg);
    const double ratio = c / eq.r_e;
    const double ds = std::sqrt(std::max(0.0, 1.0 - ratio * ratio)) / J;
    return {u0, eq.s_e, c / (eq.r_e * eq.r_e), northward ? ds : -ds};
}

namespace detail {

using OdeState = std::array<double, 4>;

inline OdeState to_ode(const GeodesicState& g) { return {g.u, g.s, g.du, g.ds}; }
inline GeodesicState from_ode(const OdeState& x) { return {x[0], x[1], x[2], x[3]}; }

struct GeodesicRhs {
    const ProfileSurface* S;
    bool meridian;
    void operator()(const OdeState& x, OdeState& dx, double) const {
        const double s = meridian ? std::clamp(x[1], S->s_min(), S->s_max()) : x[1];
        const ProfileJet j = (*S)(s);
        const double sp = j.df * j.df + j.dg * j.dg;
        dx[0] = x[2];
        dx[1] = x[3];
        if (meridian) {
            dx[2] = 0.0;
            dx[3] = -(j.df * j.d2f + j.dg * j.d2g) / sp * x[3] * x[3];
        } else {
            dx[2] = -2.0 * j.df / j.f * x[2] * x[3];
            dx[3] = (j.f * j.df * x[2] * x[2] - (j.df * j.d2f + j.dg * j.d2g) * x[3] * x[3]) / sp;
        }
    }
};

// Bisection on the dense output for the time where phi changes sign in [t0, t1].
template <class Stepper, class Phi>
double locate_event(Stepper& st, double t0, double t1, Phi&& phi, double t_tol = 1e-12) {
    OdeState x;
    st.calc_state(t0, x);
    const bool neg0 = phi(x) < 0;
    for (int it = 0; it < 200 && (t1 - t0) > t_tol; ++it) {
        const double tm = 0.5 * (t0 + t1);
        if (tm <= t0 || tm >= t1) break;
        st.calc_state(tm, x);
        if ((phi(x) < 0) == neg0)
            t0 = tm;
        else
            t1 = tm;
    }
    return t1;
}

} // namespace detail

// Integrates the geodesic equations up to time t_max (or until the crossing callback stops it).
// A start with du = 0 exactly is a meridian: u stays constant, and at a pole the longitude
// jumps by pi while the parameter s reverses.
inline Trajectory integrate(const ProfileSurface& S, const GeodesicState& x0, double t_max, const IntegrateOptions& opt) {
    namespace ode = boost::numeric::odeint;
    if (!(t_max > 0)) throw InvalidInput("t_max must be positive");
    const double sp0 = speed_squared(S, x0);
    if (std::abs(sp0 - 1.0) > 1e-10) throw InvalidInput("initial state is not unit speed");
    const EquatorInfo eq = S.equator();
    const bool meridian = x0.du == 0.0;
    const double c0 = clairaut_constant(S, x0);
    const double itol = opt.tol * 1e-2;

    Trajectory tr;
    detail::GeodesicRhs rhs{&S, meridian};
    auto stepper = ode::make_dense_output(itol, itol, ode::runge_kutta_dopri5<detail::OdeState>());
    detail::OdeState x = detail::to_ode(x0);
    double t = 0.0;
    stepper.initialize(x, t, 1e-3);
    auto record = [&](double tt, const detail::OdeState& y) {
        const GeodesicState g = detail::from_ode(y);
        if (!meridian || (g.s > S.s_min() && g.s < S.s_max())) {
            tr.drift.clairaut = std::max(tr.drift.clairaut, std::abs(clairaut_constant(S, g) - c0));
            tr.drift.speed = std::max(tr.drift.speed, std::abs(speed_squared(S, g) - 1.0));
        }
        if (opt.record) tr.points.push_back({tt, g});
    };
    record(t, x);
    double last_cross = 0.0;
    auto side = [&](const detail::OdeState& y) { return y[1] - eq.s_e; };
    double prev_side = side(x);
    bool stop = false;
    while (!stop) {
        const auto [ta, tb] = stepper.do_step(rhs);
        if (!std::isfinite(stepper.current_state()[0]) || !std::isfinite(stepper.current_state()[1]))
            throw IntegrationError("integration failed near t=" + std::to_string(ta));
        double t_hi = std::min(tb, t_max);
        // Pole passage of a meridian.
        if (meridian) {
            const double sc = stepper.current_state()[1];
            const bool north = sc > S.s_max(), south = sc < S.s_min();
            if (north || south) {
                const double pole = north ? S.s_max() : S.s_min();
                const double tp = detail::locate_event(stepper, ta, tb, [&](const detail::OdeState& y) { return y[1] - pole; });
                if (tp <= t_hi) {
                    detail::OdeState y;
                    stepper.calc_state(tp, y);
                    // Crossings before the pole within this step.
                    const double cur = side(y);
                    if ((prev_side < 0 && cur >= 0) || (prev_side > 0 && cur <= 0)) {
                        const double tc = detail::locate_event(stepper, ta, tp, side);
                        detail::OdeState z;
                        stepper.calc_state(tc, z);
                        CrossingEvent ev{tc, z[0], prev_side < 0 ? Direction::SouthToNorth : Direction::NorthToSouth, detail::from_ode(z)};
                        tr.crossings.push_back(ev);
                        last_cross = tc;
                        if (opt.on_crossing && opt.on_crossing(ev)) {
                            tr.t_end = tc;
                            tr.final_state = ev.state;
                            return tr;
                        }
                    }
                    y[0] += num::pi;
                    y[1] = pole;
                    y[3] = -y[3];
                    record(tp, y);
                    prev_side = side(y);
                    stepper.initialize(y, tp, std::max(1e-6, (tb - ta) * 0.5));
                    continue;
                }
            }
        }
        detail::OdeState y;
        stepper.calc_state(t_hi, y);
        const double cur = side(y);
        if ((prev_side < 0 && cur >= 0) || (prev_side > 0 && cur <= 0)) {
            const double tc = detail::locate_event(stepper, ta, t_hi, side);
            detail::OdeState z;
            stepper.calc_state(tc, z);
            CrossingEvent ev{tc, z[0], prev_side < 0 ? Direction::SouthToNorth : Direction::NorthToSouth, detail::from_ode(z)};
            tr.crossings.push_back(ev);
            last_cross = tc;
            if (opt.on_crossing && opt.on_crossing(ev)) {
                tr.t_end = tc;
                tr.final_state = ev.state;
                record(tc, z);
                return tr;
            }
        }
        prev_side = cur;
        record(t_hi, y);
        if (t_hi >= t_max) {
            tr.t_end = t_hi;
            tr.final_state = detail::from_ode(y);
            stop = true;
        } else if (t_hi - last_cross > opt.max_crossing_gap) {
            throw IntegrationError("no equator crossing within the time bound");
        }
    }
    return tr;
}

inline Trajectory integrate(const ProfileSurface& S, const GeodesicState& x0, double t_max, double tol = 1e-10) {
    IntegrateOptions o;
    o.tol = tol;
    return integrate(S, x0, t_max, o);
}

struct HalfSwingOde {
    double delta_u_north = 0.0, delta_u_south = 0.0;
    double t_half_north = 0.0, t_half_south = 0.0;
};

// Launches northward from the equator at level c and follows it through one crossing pair.
inline HalfSwingOde half_swing_ode(const ProfileSurface& S, double c, double tol = 1e-10, double time_bound = 1e3) {
    const EquatorInfo eq = S.equator();
    if (!(std::abs(c) > 0 && std::abs(c) < eq.r_e)) throw LevelOutOfRange("half swing needs 0 < |c| < r_e");
    IntegrateOptions o;
    o.tol = tol;
    o.record = false;
    o.max_crossing_gap = time_bound;
    int n = 0;
    o.on_crossing = [&](const CrossingEvent&) { return ++n == 2; };
    Trajectory tr = integrate(S, equator_launch(S, c), 2.0 * time_bound, o);
    if (tr.crossings.size() < 2) throw IntegrationError("half swing did not return to the equator");
    const auto& a = tr.crossings[0];
    const auto& b = tr.crossings[1];
    return {a.u, b.u - a.u, a.t, b.t - a.t};
}

struct ClosureResult {
    bool closed = false;
    int p = 0;
    int q = 0;
    double period_length = 0.0;
    double residual = 0.0;
    int crossings = 0;
};

// Follows crossing pairs from an equator launch until the orbit returns to its start.
inline ClosureResult detect_closure(const ProfileSurface& S, double c, int max_pairs = 50, double tol = 1e-8,
                                    double integ_tol = 1e-10) {
    const EquatorInfo eq = S.equator();
    if (!(std::abs(c) > 0 && std::abs(c) < eq.r_e)) throw LevelOutOfRange("closure detection needs 0 < |c| < r_e");
    const GeodesicState x0 = equator_launch(S, c);
    ClosureResult res;
    double best = std::numeric_limits<double>::infinity();
    int pairs = 0, count = 0;
    IntegrateOptions o;
    o.tol = integ_tol;
    o.record = false;
    o.max_crossing_gap = 1e3;
    o.on_crossing = [&](const CrossingEvent& ev) {
        ++count;
        if (ev.direction != Direction::SouthToNorth) return false;
        ++pairs;
        const double p = std::round(ev.u / num::two_pi);
        const GeodesicState& g = ev.state;
        const double r = std::max({std::abs(ev.u - num::two_pi * p), std::abs(g.s - x0.s), std::abs(g.du - x0.du), std::abs(g.ds - x0.ds)});
        best = std::min(best, r);
        if (r < tol) {
            res = {true, static_cast<int>(p), pairs, ev.t, r, count};
            return true;
        }
        return pairs >= max_pairs;
    };
    integrate(S, x0, 1e3 * 2.0 * max_pairs, o);
    if (!res.closed) {
        res.q = pairs;
        res.residual = best;
        res.crossings = count;
    }
    return res;
}

// States at the n uniform times (k + phase) T / n, k = 0..n-1 (non-meridian starts only).
inline std::vector<GeodesicState> sample_orbit(const ProfileSurface& S, const GeodesicState& x0, double T, std::size_t n,
                                               double phase = 0.0, double tol = 1e-10) {
    namespace ode = boost::numeric::odeint;
    if (x0.du == 0.0) throw InvalidInput("uniform sampling is for non-meridian geodesics");
    if (!(T > 0) || n == 0) throw InvalidInput("sampling needs T > 0 and n > 0");
    detail::GeodesicRhs rhs{&S, false};
    auto stepper = ode::make_dense_output(tol * 1e-2, tol * 1e-2, ode::runge_kutta_dopri5<detail::OdeState>());
    stepper.initialize(detail::to_ode(x0), 0.0, 1e-3);
    std::vector<GeodesicState> out;
    out.reserve(n);
    detail::OdeState y;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = T * (static_cast<double>(i) + phase) / static_cast<double>(n);
        if (t <= 0.0) {
            out.push_back(x0);
            continue;
        }
        while (stepper.current_time() < t) stepper.do_step(rhs);
        stepper.calc_state(t, y);
        out.push_back(detail::from_ode(y));
    }
    return out;
}

// Trajectory dump: `t,u,s,du,ds` lines at a fixed time stride.
inline void write_trajectory_csv(std::ostream& os, const ProfileSurface& S, const GeodesicState& x0, double t_max,
                                 double stride, double tol = 1e-10) {
    namespace ode = boost::numeric::odeint;
    if (!(stride > 0)) throw InvalidInput("trajectory stride must be positive");
    auto fmt = [](double v) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.15g", v);
        return std::string(buf);
    };
    os << "t,u,s,du,ds\n";
    if (x0.du == 0.0) {
        // meridians go through the pole-aware integrator and are resampled from its points
        Trajectory tr = integrate(S, x0, t_max, tol);
        double next = 0.0;
        for (const auto& p : tr.points)
            if (p.t >= next - 1e-12) {
                os << fmt(p.t) << ',' << fmt(p.x.u) << ',' << fmt(p.x.s) << ',' << fmt(p.x.du) << ',' << fmt(p.x.ds) << '\n';
                next += stride;
            }
        return;
    }
    if (std::abs(speed_squared(S, x0) - 1.0) > 1e-10) throw InvalidInput("initial state is not unit speed");
    detail::GeodesicRhs rhs{&S, false};
    auto stepper = ode::make_dense_output(tol * 1e-2, tol * 1e-2, ode::runge_kutta_dopri5<detail::OdeState>());
    stepper.initialize(detail::to_ode(x0), 0.0, 1e-3);
    const long n = static_cast<long>(std::floor(t_max / stride + 1e-9));
    detail::OdeState y;
    for (long i = 0; i <= n; ++i) {
        const double t = i * stride;
        if (i == 0) {
            y = detail::to_ode(x0);
        } else {
            while (stepper.current_time() < t) stepper.do_step(rhs);
            stepper.calc_state(t, y);
        }
        os << fmt(t) << ',' << fmt(y[0]) << ',' << fmt(y[1]) << ',' << fmt(y[2]) << ',' << fmt(y[3]) << '\n';
    }
}

} // namespace revlink
