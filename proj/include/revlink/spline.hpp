#pragma once

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace revlink {

struct SplineValue {
    double y, dy, d2y;
};

// Clamped cubic spline through (x_i, y_i) with prescribed end slopes.
class CubicSpline {
public:
    CubicSpline() = default;
    CubicSpline(std::vector<double> x, std::vector<double> y, double slope0, double slope1)
        : x_(std::move(x)), y_(std::move(y)) {
        const std::size_t n = x_.size();
        if (n < 4 || y_.size() != n) throw std::invalid_argument("spline needs at least 4 matching points");
        // Tridiagonal system for the second derivatives m_i.
        std::vector<double> a(n), b(n), c(n), r(n);
        const double h0 = x_[1] - x_[0], hn = x_[n - 1] - x_[n - 2];
        b[0] = h0 / 3.0;
        c[0] = h0 / 6.0;
        r[0] = (y_[1] - y_[0]) / h0 - slope0;
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const double hl = x_[i] - x_[i - 1], hr = x_[i + 1] - x_[i];
            a[i] = hl / 6.0;
            b[i] = (hl + hr) / 3.0;
            c[i] = hr / 6.0;
            r[i] = (y_[i + 1] - y_[i]) / hr - (y_[i] - y_[i - 1]) / hl;
        }
        a[n - 1] = hn / 6.0;
        b[n - 1] = hn / 3.0;
        r[n - 1] = slope1 - (y_[n - 1] - y_[n - 2]) / hn;
        for (std::size_t i = 1; i < n; ++i) {
            const double w = a[i] / b[i - 1];
            b[i] -= w * c[i - 1];
            r[i] -= w * r[i - 1];
        }
        m_.assign(n, 0.0);
        m_[n - 1] = r[n - 1] / b[n - 1];
        for (std::size_t i = n - 1; i-- > 0;) m_[i] = (r[i] - c[i] * m_[i + 1]) / b[i];
    }

    SplineValue operator()(double t) const {
        const std::size_t n = x_.size();
        std::size_t i = static_cast<std::size_t>(std::upper_bound(x_.begin(), x_.end(), t) - x_.begin());
        i = std::clamp<std::size_t>(i, 1, n - 1) - 1;
        const double h = x_[i + 1] - x_[i];
        const double A = (x_[i + 1] - t) / h, B = (t - x_[i]) / h;
        const double y = A * y_[i] + B * y_[i + 1] + ((A * A * A - A) * m_[i] + (B * B * B - B) * m_[i + 1]) * h * h / 6.0;
        const double dy = (y_[i + 1] - y_[i]) / h - (3.0 * A * A - 1.0) / 6.0 * h * m_[i] + (3.0 * B * B - 1.0) / 6.0 * h * m_[i + 1];
        const double d2y = A * m_[i] + B * m_[i + 1];
        return {y, dy, d2y};
    }

    // Slope at x[k0] of the cubic interpolating four consecutive samples starting at k0.
    static double four_point_slope(const std::vector<double>& x, const std::vector<double>& y, std::size_t k0, std::size_t at) {
        double d = 0.0;
        const double t = x[at];
        for (std::size_t j = k0; j < k0 + 4; ++j) {
            // derivative of the Lagrange basis l_j at t
            double sum = 0.0;
            for (std::size_t m = k0; m < k0 + 4; ++m) {
                if (m == j) continue;
                double prod = 1.0 / (x[j] - x[m]);
                for (std::size_t l = k0; l < k0 + 4; ++l) {
                    if (l == j || l == m) continue;
                    prod *= (t - x[l]) / (x[j] - x[l]);
                }
                sum += prod;
            }
            d += y[j] * sum;
        }
        return d;
    }

private:
    std::vector<double> x_, y_, m_;
};

} // namespace revlink
