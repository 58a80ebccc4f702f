#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "minkgeo/errors.hpp"
#include "minkgeo/norm.hpp"
#include "minkgeo/sphere_param.hpp"
#include "minkgeo/vec2.hpp"

namespace minkgeo {

/// Grid of radial/tangential curvatures: r'' = -rho r + tau r'.
struct CurvatureProfile {
    std::vector<double> s_grid; // sorted, in [0, 2L)
    std::vector<double> rho;
    std::vector<double> tau;
    double L = 0.0;
};

/// Supercurvatures: r'(phi(s)) = -Rho r + Tau r', psi = Tau/Rho.
struct SuperCurvature {
    std::vector<double> s_grid;
    std::vector<double> Rho;
    std::vector<double> Tau;
    std::vector<double> psi;
    std::vector<double> phi;
    NormConstants constants;
};

namespace detail {

/// Solve v = -a * r + b * r' for (a, b) in biorthogonal coordinates.
inline std::pair<double, double> frame_solve(const Basis2D& basis, Vec2 r, Vec2 rp, Vec2 v,
                                             double s_for_msg) {
    const Vec2 rc = basis.coords(r);
    const Vec2 rpc = basis.coords(rp);
    const Vec2 vc = basis.coords(v);
    const double den = cross(rc, rpc);
    if (std::fabs(den) < 1e-12)
        throw SingularFrame("det(r, r') = " + std::to_string(den) + " at s=" +
                            std::to_string(s_for_msg));
    return {cross(rpc, vc) / den, cross(rc, vc) / den};
}

} // namespace detail

/// r''(s) by central second differences Richardson-extrapolated over (h, h/2).
inline Vec2 second_derivative(const NaturalCurve& curve, double s, double h = 6e-3) {
    if (h < 1e-7 || h > 1e-2) throw InvalidParameter("second_derivative step must be in [1e-7, 1e-2]");
    const auto d2 = [&](double hh) {
        return (curve.point(s + hh) - curve.point(s) * 2.0 + curve.point(s - hh)) / (hh * hh);
    };
    const Vec2 coarse = d2(h), fine = d2(0.5 * h);
    return (fine * 4.0 - coarse) / 3.0;
}

/// (rho, tau) at s from the 2x2 Cramer solve of r'' = -rho r + tau r'.
inline std::pair<double, double> curvatures_at(const NaturalCurve& curve, double s, double h = 6e-3) {
    const Vec2 r = curve.point(s);
    const Vec2 rp = curve.derivative(s);
    const Vec2 rpp = second_derivative(curve, s, h);
    return detail::frame_solve(curve.norm().basis(), r, rp, rpp, s);
}

/// (rho, tau) through the polar chain rule: r'' = p''/||p'||^2 - p' N'/||p'||^3
/// with p'' and N' = (d/dt)||p'|| by 4th-order differences in t. Kept as a
/// high-accuracy cross-check of the direct second-difference route for C2
/// norms.
inline std::pair<double, double> curvatures_via_polar(const NaturalCurve& curve, double s,
                                                      double ht = 1e-3) {
    const PolarCurve& polar = curve.table().polar();
    const double t = curve.t_of_s(s);
    const auto fd4 = [&](auto f) {
        return (f(t + ht) - f(t - ht)) * (8.0 / (12.0 * ht)) -
               (f(t + 2 * ht) - f(t - 2 * ht)) * (1.0 / (12.0 * ht));
    };
    const Vec2 p1 = polar.derivative(t);
    const Vec2 p2 = fd4([&](double u) { return polar.derivative(u); });
    const double n = curve.norm()(p1);
    const double n1 = fd4([&](double u) { return polar.speed(u); });
    const Vec2 r = polar.point(t);
    const Vec2 rp = p1 / n;
    const Vec2 rpp = p2 / (n * n) - p1 * (n1 / (n * n * n));
    return detail::frame_solve(curve.norm().basis(), r, rp, rpp, s);
}

/// (Rho, Tau) at s from r'(phi(s)) = -Rho r + Tau r'.
inline std::pair<double, double> supercurvatures_at(const NaturalCurve& curve,
                                                    const PhaseShift& phase, double s) {
    const Vec2 r = curve.point(s);
    const Vec2 rp = curve.derivative(s);
    const Vec2 rp_phi = curve.derivative(phase(s));
    return detail::frame_solve(curve.norm().basis(), r, rp, rp_phi, s);
}

/// psi = Tau/Rho at the grid point nearest to s. The precondition
/// |Rho| >= c^2/(C^2+Cc+c^2) - 1e-9 guarantees the denominator.
inline double quotient_curvature(const SuperCurvature& super, double s) {
    const auto it = std::lower_bound(super.s_grid.begin(), super.s_grid.end(), s);
    std::size_t i = static_cast<std::size_t>(it - super.s_grid.begin());
    if (i == super.s_grid.size() || (i > 0 && s - super.s_grid[i - 1] < super.s_grid[i] - s)) --i;
    const double c = super.constants.c, C = super.constants.C;
    const double floor = c * c / (C * C + C * c + c * c) - 1e-9;
    if (std::fabs(super.Rho[i]) < floor)
        throw SingularFrame("Rho below its guaranteed floor at s=" + std::to_string(super.s_grid[i]));
    return super.Tau[i] / super.Rho[i];
}

struct ProfileOptions {
    double fd_step = 6e-3;
    bool validate = true;
    int curve_grid = 4096;
};

/// Arc-length positions of the four axis points t = 0, pi/2, pi, 3pi/2.
inline std::vector<double> axis_arc_positions(const NaturalCurve& curve) {
    const double L = curve.half_length();
    const double s_half = curve.table().length_at(M_PI / 2.0);
    return {0.0, s_half, L, L + s_half};
}

/// Tabulates (rho, tau, Rho, Tau, psi, phi) on a uniform grid over [0, 2L).
/// For AC1 norms (l_p with p < 2) the grid drops bands of half-width 1e-3 in s
/// around the four axis points, where rho blows up; the trimming is visible in
/// the returned grid rather than patched over. Type invariants are checked
/// unless opts.validate is cleared; violations throw, they are never clamped.
inline std::pair<CurvatureProfile, SuperCurvature> build_profile(const NaturalCurve& curve,
                                                                 int grid_size,
                                                                 const ProfileOptions& opts = {}) {
    if (grid_size < 256) throw InvalidParameter("build_profile needs grid_size >= 256");
    const int n = grid_size + (4 - grid_size % 4) % 4;
    const double L = curve.half_length();
    const double step = 2.0 * L / n;

    std::vector<double> bands;
    if (curve.norm().smoothness() == Smoothness::AC1) bands = axis_arc_positions(curve);
    const auto excluded = [&](double s) {
        for (double b : bands)
            if (std::fabs(s - b) < 1e-3 || std::fabs(s - b - 2.0 * L) < 1e-3) return true;
        return false;
    };

    CurvatureProfile prof;
    prof.L = L;
    SuperCurvature super;
    super.constants = norm_constants(curve.norm());
    const PhaseShift phase(curve);

    for (int i = 0; i < n; ++i) {
        const double s = step * i;
        if (excluded(s)) continue;
        const auto [rho, tau] = curvatures_at(curve, s, opts.fd_step);
        const auto [Rho, Tau] = supercurvatures_at(curve, phase, s);
        prof.s_grid.push_back(s);
        prof.rho.push_back(rho);
        prof.tau.push_back(tau);
        super.s_grid.push_back(s);
        super.Rho.push_back(Rho);
        super.Tau.push_back(Tau);
        super.psi.push_back(Tau / Rho);
        super.phi.push_back(phase(s));
    }

    if (opts.validate) {
        const double c = super.constants.c, C = super.constants.C;
        const double tau_bound = (C + c) * C / (c * c);
        const double rho_floor = c * c / (C * C + C * c + c * c);
        for (std::size_t i = 0; i < prof.s_grid.size(); ++i) {
            if (prof.rho[i] < -1e-9)
                throw ProfileInvariantViolation("rho < 0 at s=" + std::to_string(prof.s_grid[i]));
            if (std::fabs(super.Tau[i]) > tau_bound * std::fabs(super.Rho[i]) + 1e-8)
                throw ProfileInvariantViolation("|Tau| bound violated at s=" +
                                                std::to_string(prof.s_grid[i]));
            if (std::fabs(super.Rho[i]) < rho_floor - 1e-8)
                throw ProfileInvariantViolation("|Rho| floor violated at s=" +
                                                std::to_string(prof.s_grid[i]));
        }
        // L-periodicity on untrimmed half-grid pairs
        for (std::size_t i = 0; i + 1 <= prof.s_grid.size(); ++i) {
            const double s2 = prof.s_grid[i] + L;
            const auto it = std::lower_bound(prof.s_grid.begin(), prof.s_grid.end(), s2 - 1e-12);
            if (it == prof.s_grid.end() || std::fabs(*it - s2) > 1e-9) continue;
            const std::size_t j = static_cast<std::size_t>(it - prof.s_grid.begin());
            if (std::fabs(prof.rho[i] - prof.rho[j]) > 1e-8 ||
                std::fabs(prof.tau[i] - prof.tau[j]) > 1e-8)
                throw ProfileInvariantViolation("L-periodicity violated at s=" +
                                                std::to_string(prof.s_grid[i]));
        }
        // trapezoid over [0, L]
        double int_rho = 0.0, int_tau = 0.0;
        for (std::size_t i = 0; i + 1 < prof.s_grid.size() && prof.s_grid[i] < L; ++i) {
            const double b = std::min(prof.s_grid[i + 1], L);
            const double w = 0.5 * (b - prof.s_grid[i]);
            int_rho += w * (prof.rho[i] + prof.rho[i + 1]);
            int_tau += w * (prof.tau[i] + prof.tau[i + 1]);
        }
        if (!(int_rho > 0.0))
            throw ProfileInvariantViolation("int_0^L rho must be positive");
        if (std::fabs(int_tau) > 1e-6 * L)
            throw ProfileInvariantViolation("int_0^L tau = " + std::to_string(int_tau) +
                                            " exceeds 1e-6 * L");
    }
    return {std::move(prof), std::move(super)};
}

inline std::pair<CurvatureProfile, SuperCurvature> build_profile(const Norm2D& norm, int grid_size,
                                                                 const ProfileOptions& opts = {}) {
    return build_profile(NaturalCurve(norm, opts.curve_grid), grid_size, opts);
}

} // namespace minkgeo
