#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <exception>
#include <limits>
#include <numbers>
#include <thread>
#include <tuple>
#include <utility>
#include <vector>

namespace revlink::num {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

template <std::size_t N>
struct GaussRule {
    std::array<double, N> x{};
    std::array<double, N> w{};
};

// Nodes and weights on [-1, 1] by Newton iteration on P_N.
template <std::size_t N>
const GaussRule<N>& gauss_legendre() {
    static const GaussRule<N> rule = [] {
        GaussRule<N> r;
        for (std::size_t i = 0; i < N; ++i) {
            double z = std::cos(pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(N) + 0.5));
            double dp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = z;
                for (std::size_t k = 2; k <= N; ++k) {
                    double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / static_cast<double>(k);
                    p0 = p1;
                    p1 = p2;
                }
                dp = static_cast<double>(N) * (z * p1 - p0) / (z * z - 1.0);
                double dz = p1 / dp;
                z -= dz;
                if (std::abs(dz) < 1e-16) break;
            }
            r.x[i] = z;
            r.w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        }
        return r;
    }();
    return rule;
}

template <std::size_t N = 20, class F>
double gauss_panel(F&& f, double a, double b) {
    const auto& r = gauss_legendre<N>();
    const double h = 0.5 * (b - a), m = 0.5 * (a + b);
    double acc = 0.0;
    for (std::size_t i = 0; i < N; ++i) acc += r.w[i] * f(m + h * r.x[i]);
    return acc * h;
}

// Fixed composite rule, used to check refinement stability.
template <class F>
double gauss_composite(F&& f, double a, double b, int panels) {
    double acc = 0.0;
    const double h = (b - a) / panels;
    for (int i = 0; i < panels; ++i) acc += gauss_panel(f, a + i * h, a + (i + 1) * h);
    return acc;
}

struct QuadResult {
    double value = 0.0;
    double error = 0.0;
    int panels = 0;
};

// Adaptive Gauss-Legendre quadrature: the panel with the largest local error estimate
// (panel vs. sum over its halves) is split until the total estimate meets the tolerance
// or the panel budget is spent.
template <class F>
QuadResult gauss_adaptive(F&& f, double a, double b, double rel_tol = 1e-12, int max_panels = 4000) {
    struct Seg {
        double a, b, v, err;
        bool operator<(const Seg& o) const { return err < o.err; }
    };
    QuadResult out;
    if (a == b) return out;
    auto make = [&](double lo, double hi) {
        const double m = 0.5 * (lo + hi);
        const double l = gauss_panel(f, lo, m), r = gauss_panel(f, m, hi);
        return std::pair{Seg{lo, m, l, 0.0}, Seg{m, hi, r, 0.0}};
    };
    std::vector<Seg> heap;
    {
        const double whole = gauss_panel(f, a, b);
        const double m = 0.5 * (a + b);
        const double l = gauss_panel(f, a, m), r = gauss_panel(f, m, b);
        const double e = std::abs(l + r - whole) / 2;
        heap.push_back({a, m, l, e});
        heap.push_back({m, b, r, e});
    }
    std::make_heap(heap.begin(), heap.end());
    auto totals = [&] {
        double v = 0, e = 0;
        for (const auto& s : heap) {
            v += s.v;
            e += s.err;
        }
        return std::pair{v, e};
    };
    auto [val, err] = totals();
    while (static_cast<int>(heap.size()) < max_panels) {
        if (err <= std::max(rel_tol * std::abs(val), 8.0 * std::numeric_limits<double>::epsilon() * std::abs(val))) break;
        std::pop_heap(heap.begin(), heap.end());
        const Seg worst = heap.back();
        heap.pop_back();
        auto [l, r] = make(worst.a, worst.b);
        const double e = std::abs(l.v + r.v - worst.v) / 2;
        l.err = r.err = e;
        val += l.v + r.v - worst.v;
        err += 2 * e - worst.err;
        heap.push_back(l);
        std::push_heap(heap.begin(), heap.end());
        heap.push_back(r);
        std::push_heap(heap.begin(), heap.end());
    }
    std::tie(out.value, out.error) = totals();
    out.panels = static_cast<int>(heap.size());
    return out;
}

// Root of a sign-changing function on [a, b]; runs until the bracket collapses or width < tol.
template <class F>
double bisect(F&& f, double a, double b, double tol = 0.0) {
    double fa = f(a);
    if (fa == 0.0) return a;
    for (int it = 0; it < 300; ++it) {
        const double m = 0.5 * (a + b);
        if (m <= a || m >= b || (b - a) <= tol) return m;
        const double fm = f(m);
        if (fm == 0.0) return m;
        if ((fm < 0) == (fa < 0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

struct Extremum {
    double x = 0.0;
    double value = 0.0;
};

// Golden-section search for a maximum of f on [a, b].
template <class F>
Extremum golden_max(F&& f, double a, double b, double tol = 1e-12) {
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - invphi * (b - a), d = a + invphi * (b - a);
    double fc = f(c), fd = f(d);
    for (int it = 0; it < 200 && (b - a) > tol; ++it) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = f(d);
        }
    }
    return fc > fd ? Extremum{c, fc} : Extremum{d, fd};
}

template <class F>
Extremum golden_min(F&& f, double a, double b, double tol = 1e-12) {
    auto e = golden_max([&](double x) { return -f(x); }, a, b, tol);
    return {e.x, -e.value};
}

struct Extrapolation {
    double value = 0.0;
    double error = 0.0;
    int order = 0;
};

// Richardson table for samples A(h_k), h_{k+1} = h_k / ratio, error expansion in integer powers of h.
// Returns the column whose last two entries agree best.
inline Extrapolation richardson(const std::vector<double>& a, double ratio = 2.0, int max_order = 6) {
    const std::size_t n = a.size();
    Extrapolation best{a.back(), std::numeric_limits<double>::infinity(), 0};
    if (n < 2) return best;
    std::vector<std::vector<double>> t(n);
    for (std::size_t i = 0; i < n; ++i) {
        t[i].push_back(a[i]);
        for (std::size_t j = 1; j <= i && static_cast<int>(j) <= max_order; ++j) {
            const double fac = std::pow(ratio, static_cast<double>(j)) - 1.0;
            t[i].push_back(t[i][j - 1] + (t[i][j - 1] - t[i - 1][j - 1]) / fac);
        }
    }
    for (std::size_t j = 0; j < t[n - 1].size() && j < t[n - 2].size(); ++j) {
        const double err = std::abs(t[n - 1][j] - t[n - 2][j]);
        if (err < best.error) best = {t[n - 1][j], err, static_cast<int>(j)};
    }
    return best;
}

inline unsigned resolve_workers(unsigned requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1u : hw;
}

// Evaluates fn(i) for i in [0, n) on up to `workers` threads; results are placed by index,
// so the output does not depend on the worker count.
template <class R, class Fn>
std::vector<R> parallel_map(std::size_t n, unsigned workers, Fn&& fn) {
    std::vector<R> out(n);
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
    if (workers == 1) {
        for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
        return out;
    }
    std::vector<std::exception_ptr> errs(workers);
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < n; i += workers) out[i] = fn(i);
            } catch (...) {
                errs[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errs)
        if (e) std::rethrow_exception(e);
    return out;
}

inline double wrap_pi(double x) {
    x = std::fmod(x + pi, two_pi);
    if (x < 0) x += two_pi;
    return x - pi;
}

} // namespace revlink::num
