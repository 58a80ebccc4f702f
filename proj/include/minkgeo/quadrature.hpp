#pragma once

#include <cmath>
#include <functional>

#include "minkgeo/errors.hpp"

namespace minkgeo {

namespace detail {

template <typename F>
double adaptive_simpson_rec(const F& f, double a, double b, double fa, double fm, double fb,
                            double whole, double tol, int depth, int max_depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (std::fabs(delta) <= 15.0 * tol || (b - a) < 1e-15)
        return left + right + delta / 15.0;
    if (depth >= max_depth) {
        // noise-limited panels this narrow contribute at most width * osc;
        // only a macroscopic unresolved panel is a genuine failure
        if ((b - a) < 1e-9) return left + right + delta / 15.0;
        throw QuadratureFailure("adaptive Simpson exceeded depth " + std::to_string(max_depth) +
                                " on [" + std::to_string(a) + ", " + std::to_string(b) + "]");
    }
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1, max_depth) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1, max_depth);
}

} // namespace detail

/// Adaptive Simpson with the classical 15x error estimate; refines until the
/// local absolute error estimate drops below tol.
template <typename F>
double adaptive_simpson(const F& f, double a, double b, double tol = 1e-13, int max_depth = 30) {
    if (a == b) return 0.0;
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, 0, max_depth);
}

/// Composite trapezoid with n uniform panels. Slow but dead simple; used as an
/// independent oracle against the adaptive rule.
template <typename F>
double trapezoid(const F& f, double a, double b, long n) {
    const double h = (b - a) / static_cast<double>(n);
    double acc = 0.5 * (f(a) + f(b));
    for (long i = 1; i < n; ++i) acc += f(a + h * static_cast<double>(i));
    return acc * h;
}

/// Golden-section minimization on [a, b]; f unimodal there.
template <typename F>
double golden_section_min(const F& f, double a, double b, double tol = 1e-12) {
    constexpr double inv_phi = 0.6180339887498949;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > tol) {
        if (f1 < f2) {
            b = x2; x2 = x1; f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1; x1 = x2; f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
    }
    return 0.5 * (a + b);
}

} // namespace minkgeo
