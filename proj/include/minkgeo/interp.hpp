#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "minkgeo/errors.hpp"

namespace minkgeo {

/// Shape-preserving cubic interpolant (Fritsch-Carlson / PCHIP). Monotone data
/// yields a monotone interpolant, which is what keeps tabulated arc length
/// strictly increasing between nodes.
class Pchip {
public:
    Pchip() = default;

    Pchip(std::span<const double> x, std::span<const double> y) {
        const std::size_t n = x.size();
        if (n < 2 || y.size() != n) throw InvalidParameter("pchip needs >= 2 matching nodes");
        x_.assign(x.begin(), x.end());
        y_.assign(y.begin(), y.end());
        for (std::size_t i = 0; i + 1 < n; ++i)
            if (!(x_[i + 1] > x_[i])) throw InvalidParameter("pchip nodes must be strictly increasing");
        d_.resize(n);
        if (n == 2) {
            d_[0] = d_[1] = (y_[1] - y_[0]) / (x_[1] - x_[0]);
            return;
        }
        std::vector<double> h(n - 1), slope(n - 1);
        for (std::size_t i = 0; i + 1 < n; ++i) {
            h[i] = x_[i + 1] - x_[i];
            slope[i] = (y_[i + 1] - y_[i]) / h[i];
        }
        for (std::size_t i = 1; i + 1 < n; ++i) {
            if (slope[i - 1] * slope[i] <= 0.0) {
                d_[i] = 0.0;
            } else {
                const double w1 = 2.0 * h[i] + h[i - 1];
                const double w2 = h[i] + 2.0 * h[i - 1];
                d_[i] = (w1 + w2) / (w1 / slope[i - 1] + w2 / slope[i]);
            }
        }
        d_[0] = endpoint_slope(h[0], h[1], slope[0], slope[1]);
        d_[n - 1] = endpoint_slope(h[n - 2], h[n - 3], slope[n - 2], slope[n - 3]);
    }

    double operator()(double x) const {
        const std::size_t i = segment(x);
        const double h = x_[i + 1] - x_[i];
        const double t = (x - x_[i]) / h;
        const double t2 = t * t, t3 = t2 * t;
        const double h00 = 2 * t3 - 3 * t2 + 1;
        const double h10 = t3 - 2 * t2 + t;
        const double h01 = -2 * t3 + 3 * t2;
        const double h11 = t3 - t2;
        return h00 * y_[i] + h10 * h * d_[i] + h01 * y_[i + 1] + h11 * h * d_[i + 1];
    }

    double derivative(double x) const {
        const std::size_t i = segment(x);
        const double h = x_[i + 1] - x_[i];
        const double t = (x - x_[i]) / h;
        const double t2 = t * t;
        const double dh00 = (6 * t2 - 6 * t) / h;
        const double dh10 = 3 * t2 - 4 * t + 1;
        const double dh01 = (-6 * t2 + 6 * t) / h;
        const double dh11 = 3 * t2 - 2 * t;
        return dh00 * y_[i] + dh10 * d_[i] + dh01 * y_[i + 1] + dh11 * d_[i + 1];
    }

    double x_front() const { return x_.front(); }
    double x_back() const { return x_.back(); }
    bool empty() const { return x_.empty(); }

private:
    static double endpoint_slope(double h0, double h1, double s0, double s1) {
        // one-sided three-point estimate, limited as in Fritsch-Carlson
        double d = ((2.0 * h0 + h1) * s0 - h0 * s1) / (h0 + h1);
        if (d * s0 <= 0.0) return 0.0;
        if (s0 * s1 < 0.0 && std::fabs(d) > 3.0 * std::fabs(s0)) return 3.0 * s0;
        return d;
    }

    std::size_t segment(double x) const {
        if (x <= x_.front()) return 0;
        if (x >= x_.back()) return x_.size() - 2;
        const auto it = std::upper_bound(x_.begin(), x_.end(), x);
        return static_cast<std::size_t>(it - x_.begin()) - 1;
    }

    std::vector<double> x_, y_, d_;
};

/// Natural cubic spline (C2). Preferred for smooth periodic sample data,
/// where PCHIP's C1 kinks would leak into curvature-level quantities; pad the
/// data periodically and the natural boundary condition stays out of the way.
class CubicSpline {
public:
    CubicSpline() = default;

    CubicSpline(std::span<const double> x, std::span<const double> y) {
        const std::size_t n = x.size();
        if (n < 3 || y.size() != n) throw InvalidParameter("spline needs >= 3 matching nodes");
        x_.assign(x.begin(), x.end());
        y_.assign(y.begin(), y.end());
        for (std::size_t i = 0; i + 1 < n; ++i)
            if (!(x_[i + 1] > x_[i]))
                throw InvalidParameter("spline nodes must be strictly increasing");
        // second derivatives from the standard tridiagonal system
        m_.assign(n, 0.0);
        std::vector<double> diag(n, 1.0), off(n, 0.0), rhs(n, 0.0);
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const double h0 = x_[i] - x_[i - 1], h1 = x_[i + 1] - x_[i];
            diag[i] = 2.0 * (h0 + h1);
            off[i] = h1;
            rhs[i] = 6.0 * ((y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0);
        }
        // Thomas algorithm with natural ends m_0 = m_{n-1} = 0
        std::vector<double> c(n, 0.0), d(n, 0.0);
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const double h0 = x_[i] - x_[i - 1];
            const double denom = diag[i] - (i > 1 ? h0 * c[i - 1] : 0.0);
            c[i] = off[i] / denom;
            d[i] = (rhs[i] - (i > 1 ? h0 * d[i - 1] : 0.0)) / denom;
        }
        for (std::size_t i = n - 2; i >= 1; --i) {
            m_[i] = d[i] - c[i] * m_[i + 1];
            if (i == 1) break;
        }
    }

    double operator()(double x) const {
        const std::size_t i = segment(x);
        const double h = x_[i + 1] - x_[i];
        const double a = (x_[i + 1] - x) / h, b = (x - x_[i]) / h;
        return a * y_[i] + b * y_[i + 1] +
               ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) * (h * h) / 6.0;
    }

private:
    std::size_t segment(double x) const {
        if (x <= x_.front()) return 0;
        if (x >= x_.back()) return x_.size() - 2;
        const auto it = std::upper_bound(x_.begin(), x_.end(), x);
        return static_cast<std::size_t>(it - x_.begin()) - 1;
    }

    std::vector<double> x_, y_, m_;
};

} // namespace minkgeo
