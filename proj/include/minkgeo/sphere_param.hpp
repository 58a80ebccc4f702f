#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "minkgeo/errors.hpp"
#include "minkgeo/interp.hpp"
#include "minkgeo/norm.hpp"
#include "minkgeo/quadrature.hpp"
#include "minkgeo/vec2.hpp"

namespace minkgeo {

/// Polar parameterization p(t) = e^{it} / ||e^{it}|| of the unit sphere,
/// where e^{it} = cos(t) e1 + sin(t) e2.
class PolarCurve {
public:
    explicit PolarCurve(Norm2D norm) : norm_(std::move(norm)) {}

    Vec2 point(double t) const {
        const Vec2 u = norm_.basis().from_coords({std::cos(t), std::sin(t)});
        return u / norm_(u);
    }

    /// p'(t), by the quotient rule when the norm carries a gradient, else by a
    /// 4th-order central difference with step 1e-5.
    Vec2 derivative(double t) const {
        if (norm_.has_grad()) {
            const Vec2 u = norm_.basis().from_coords({std::cos(t), std::sin(t)});
            const Vec2 du = norm_.basis().from_coords({-std::sin(t), std::cos(t)});
            const double f = norm_(u);
            const double df = dot(norm_.grad(u), du);
            return du / f - u * (df / (f * f));
        }
        const double h = 1e-5;
        const Vec2 d = (point(t + h) - point(t - h)) * 8.0 - (point(t + 2 * h) - point(t - 2 * h));
        return d / (12.0 * h);
    }

    /// ||p'(t)|| in the Banach norm.
    double speed(double t) const { return norm_(derivative(t)); }

    const Norm2D& norm() const { return norm_; }

private:
    Norm2D norm_;
};

inline Vec2 polar_point(const Norm2D& norm, double t) { return PolarCurve(norm).point(t); }
inline Vec2 polar_derivative(const Norm2D& norm, double t) { return PolarCurve(norm).derivative(t); }

/// Tabulated arc length s(t) = int_0^t ||p'||, with the half-length L = s(pi)
/// and an accurate two-way map between t and s. Nodes are uniform over
/// [0, 2pi]; off-node values come from the cumulative table plus a local
/// adaptive-Simpson correction, so queries stay near machine accuracy rather
/// than interpolation accuracy.
class ArcLengthTable {
public:
    ArcLengthTable(Norm2D norm, int grid_size) : polar_(std::move(norm)) {
        if (grid_size < 256) throw InvalidParameter("build_arc_length needs grid_size >= 256");
        n_ = grid_size + (4 - grid_size % 4) % 4; // multiples of 4 put pi/2, pi, 3pi/2 on nodes
        const double two_pi = 2.0 * M_PI;
        t_grid_.resize(static_cast<std::size_t>(n_) + 1);
        s_values_.resize(static_cast<std::size_t>(n_) + 1);
        for (int i = 0; i <= n_; ++i) t_grid_[static_cast<std::size_t>(i)] = two_pi * i / n_;
        s_values_[0] = 0.0;
        for (int i = 0; i < n_; ++i) {
            const double panel = adaptive_simpson(
                [this](double u) { return polar_.speed(u); }, t_grid_[static_cast<std::size_t>(i)],
                t_grid_[static_cast<std::size_t>(i) + 1], 1e-13);
            s_values_[static_cast<std::size_t>(i) + 1] = s_values_[static_cast<std::size_t>(i)] + panel;
        }
        L_ = s_values_[static_cast<std::size_t>(n_ / 2)];
        s_of_t_ = Pchip(t_grid_, s_values_);
        t_of_s_ = Pchip(s_values_, t_grid_);
    }

    double half_length() const { return L_; }
    const std::vector<double>& t_grid() const { return t_grid_; }
    const std::vector<double>& s_values() const { return s_values_; }
    const PolarCurve& polar() const { return polar_; }

    /// s(t) for any real t (winding handled via s(t + 2pi) = s(t) + 2L).
    double length_at(double t) const {
        const double two_pi = 2.0 * M_PI;
        double k = std::floor(t / two_pi);
        double tr = t - k * two_pi;
        if (tr >= two_pi) { tr -= two_pi; k += 1.0; }
        const int i = std::min(static_cast<int>(tr / two_pi * n_), n_ - 1);
        const double base = s_values_[static_cast<std::size_t>(i)];
        const double local = adaptive_simpson(
            [this](double u) { return polar_.speed(u); }, t_grid_[static_cast<std::size_t>(i)], tr, 1e-14);
        return base + local + 2.0 * L_ * k;
    }

    /// t(s): bisection seeded by the interpolant, polished by Newton with
    /// derivative ||p'(t)||. Lands |s(t) - s| well below 1e-10.
    double invert(double s) const {
        const double two_pi = 2.0 * M_PI;
        const double span = 2.0 * L_;
        double k = std::floor(s / span);
        double sr = s - k * span;
        if (sr >= span) { sr -= span; k += 1.0; }
        // bracket from the cumulative table
        std::size_t lo = 0, hi = static_cast<std::size_t>(n_);
        while (hi - lo > 1) {
            const std::size_t mid = (lo + hi) / 2;
            if (s_values_[mid] <= sr) lo = mid; else hi = mid;
        }
        const double t_lo = t_grid_[lo];
        const double s_base = s_values_[lo];
        double a = t_lo, b = t_grid_[hi];
        double t = std::min(std::max(t_of_s_(sr), a), b);
        const auto residual = [&](double tt) {
            return s_base +
                   adaptive_simpson([this](double u) { return polar_.speed(u); }, t_lo, tt, 1e-15) -
                   sr;
        };
        double res = residual(t);
        for (int iter = 0; iter < 60; ++iter) {
            if (std::fabs(res) <= 1e-14) break;
            if (res > 0.0) b = t; else a = t;
            const double dt = res / polar_.speed(t);
            double next = t - dt;
            if (!(next > a) || !(next < b)) next = 0.5 * (a + b); // Newton left the bracket
            if (next == t) break;
            t = next;
            res = residual(t);
        }
        return t + two_pi * k;
    }

private:
    PolarCurve polar_;
    int n_ = 0;
    std::vector<double> t_grid_, s_values_;
    double L_ = 0.0;
    Pchip s_of_t_, t_of_s_;
};

inline ArcLengthTable build_arc_length(const Norm2D& norm, int grid_size = 4096) {
    return ArcLengthTable(norm, grid_size);
}

inline double invert_arc_length(const ArcLengthTable& table, double s) { return table.invert(s); }

/// Natural (unit-speed) parameterization r(s) = p(t(s)).
class NaturalCurve {
public:
    explicit NaturalCurve(Norm2D norm, int grid_size = 4096)
        : table_(std::move(norm), grid_size) {}

    double half_length() const { return table_.half_length(); }
    const Norm2D& norm() const { return table_.polar().norm(); }
    const ArcLengthTable& table() const { return table_; }

    double t_of_s(double s) const { return table_.invert(s); }

    Vec2 point(double s) const { return table_.polar().point(table_.invert(s)); }

    /// r'(s) = p'(t(s)) / ||p'(t(s))||; exactly unit-norm by construction.
    Vec2 derivative(double s) const {
        const double t = table_.invert(s);
        const Vec2 d = table_.polar().derivative(t);
        return d / norm()(d);
    }

private:
    ArcLengthTable table_;
};

inline NaturalCurve build_natural_curve(const Norm2D& norm, int grid_size = 4096) {
    return NaturalCurve(norm, grid_size);
}

inline Vec2 natural_point(const NaturalCurve& curve, double s) { return curve.point(s); }
inline Vec2 natural_derivative(const NaturalCurve& curve, double s) { return curve.derivative(s); }

/// The unique phi in (s, s+2L) with r(phi) = r'(s). Solved in angle space:
/// r'(s) is itself a sphere point, so its polar angle hands us t(phi)
/// directly and the arc-length table converts it.
inline double phase_shift(const NaturalCurve& curve, double s) {
    const double two_L = 2.0 * curve.half_length();
    const Vec2 rp = curve.derivative(s);
    const Vec2 c = curve.norm().basis().coords(rp);
    double theta = std::atan2(c.y, c.x);
    if (theta < 0.0) theta += 2.0 * M_PI;
    const double phi0 = curve.table().length_at(theta); // in [0, 2L)
    double delta = std::fmod(phi0 - s, two_L);
    if (delta <= 0.0) delta += two_L;
    const double phi = s + delta;
    const double residual = curve.norm()(curve.point(phi) - rp);
    if (residual > 1e-8)
        throw PhaseNotFound("phase shift residual " + std::to_string(residual) + " at s=" +
                            std::to_string(s));
    return phi;
}

/// Callable wrapper around phase_shift; phi(s) in (s, s+2L), continuous and
/// non-decreasing for smooth norms.
class PhaseShift {
public:
    explicit PhaseShift(const NaturalCurve& curve) : curve_(&curve) {}
    double operator()(double s) const { return phase_shift(*curve_, s); }

private:
    const NaturalCurve* curve_;
};

} // namespace minkgeo
