#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "minkgeo/curvature.hpp"
#include "minkgeo/errors.hpp"
#include "minkgeo/interp.hpp"
#include "minkgeo/norm.hpp"
#include "minkgeo/sphere_param.hpp"
#include "minkgeo/vec2.hpp"

namespace minkgeo {

struct OdeState {
    double s = 0.0;
    Vec2 r;
    Vec2 r_prime;
};

struct ReconstructedCurve {
    std::vector<double> s_grid;
    std::vector<Vec2> r;
    std::vector<Vec2> r_prime;
    double antipodal_residual = 0.0; // max ||r(s+L) + r(s)||, ambient norm
    double periodic_residual = 0.0;  // max ||r(s+2L) - r(s)||, ambient norm
};

using CoeffFn = std::function<double(double)>;

/// Periodic shape-preserving interpolant of a tabulated coefficient, for
/// feeding profiles into the integrator.
inline CoeffFn make_periodic_coeff(std::vector<double> s_grid, std::vector<double> values,
                                   double period) {
    if (s_grid.size() != values.size() || s_grid.size() < 4)
        throw InvalidParameter("coefficient table needs >= 4 matching nodes");
    // pad with ghost nodes so the interpolant is smooth across the wrap
    const std::size_t pad = 3;
    std::vector<double> xs, ys;
    xs.reserve(s_grid.size() + 2 * pad);
    ys.reserve(xs.capacity());
    const std::size_t n = s_grid.size();
    for (std::size_t k = 0; k < pad; ++k) {
        xs.push_back(s_grid[n - pad + k] - period);
        ys.push_back(values[n - pad + k]);
    }
    for (std::size_t k = 0; k < n; ++k) {
        xs.push_back(s_grid[k]);
        ys.push_back(values[k]);
    }
    for (std::size_t k = 0; k < pad; ++k) {
        xs.push_back(s_grid[k] + period);
        ys.push_back(values[k]);
    }
    auto interp = std::make_shared<Pchip>(xs, ys);
    const double s0 = s_grid.front();
    return [interp, s0, period](double s) {
        double u = s - s0;
        u -= std::floor(u / period) * period;
        return (*interp)(s0 + u);
    };
}

/// Integrates r'' = -rho(s) r + tau(s) r' as a first-order system in (r, r')
/// with classical fixed-step RK4. The step is snapped to an integer divisor of
/// L so closure residuals compare exact node pairs. Throws BlowUp once
/// |r| > 10 (inconsistent coefficients).
inline ReconstructedCurve integrate_sphere(const CoeffFn& rho, const CoeffFn& tau, Vec2 r0,
                                           Vec2 r0p, double s_max, double step, double L) {
    if (std::fabs(cross(r0, r0p)) < 1e-12) throw SingularFrame("initial frame is degenerate");
    if (!(step > 0.0) || !(s_max > 0.0) || !(L > 0.0))
        throw InvalidParameter("integrate_sphere needs positive step, s_max, L");
    const long per_L = std::max(1L, std::lround(L / step));
    const double h = L / static_cast<double>(per_L);
    const long n_steps = static_cast<long>(std::ceil(s_max / h - 1e-9));

    ReconstructedCurve out;
    out.s_grid.reserve(static_cast<std::size_t>(n_steps) + 1);
    out.r.reserve(out.s_grid.capacity());
    out.r_prime.reserve(out.s_grid.capacity());

    const auto deriv = [&](double s, Vec2 r, Vec2 v) {
        return std::pair<Vec2, Vec2>{v, r * (-rho(s)) + v * tau(s)};
    };

    Vec2 r = r0, v = r0p;
    out.s_grid.push_back(0.0);
    out.r.push_back(r);
    out.r_prime.push_back(v);
    for (long i = 0; i < n_steps; ++i) {
        const double s = static_cast<double>(i) * h;
        const auto [k1r, k1v] = deriv(s, r, v);
        const auto [k2r, k2v] = deriv(s + 0.5 * h, r + k1r * (0.5 * h), v + k1v * (0.5 * h));
        const auto [k3r, k3v] = deriv(s + 0.5 * h, r + k2r * (0.5 * h), v + k2v * (0.5 * h));
        const auto [k4r, k4v] = deriv(s + h, r + k3r * h, v + k3v * h);
        r += (k1r + k2r * 2.0 + k3r * 2.0 + k4r) * (h / 6.0);
        v += (k1v + k2v * 2.0 + k3v * 2.0 + k4v) * (h / 6.0);
        if (r.norm2() > 10.0)
            throw BlowUp("|r| exceeded 10 at s=" + std::to_string(s + h));
        out.s_grid.push_back(static_cast<double>(i + 1) * h);
        out.r.push_back(r);
        out.r_prime.push_back(v);
    }

    const std::size_t total = out.s_grid.size();
    const std::size_t lag = static_cast<std::size_t>(per_L);
    for (std::size_t i = 0; i + lag < total; ++i)
        out.antipodal_residual =
            std::max(out.antipodal_residual, (out.r[i + lag] + out.r[i]).norm2());
    for (std::size_t i = 0; i + 2 * lag < total; ++i)
        out.periodic_residual =
            std::max(out.periodic_residual, (out.r[i + 2 * lag] - out.r[i]).norm2());
    return out;
}

inline ReconstructedCurve integrate_sphere(const CurvatureProfile& prof, Vec2 r0, Vec2 r0p,
                                           double s_max, double step) {
    return integrate_sphere(make_periodic_coeff(prof.s_grid, prof.rho, 2.0 * prof.L),
                            make_periodic_coeff(prof.s_grid, prof.tau, 2.0 * prof.L), r0, r0p,
                            s_max, step, prof.L);
}

/// The unique linear map sending frame_x componentwise to frame_y.
inline Mat2 build_isometry(std::pair<Vec2, Vec2> frame_x, std::pair<Vec2, Vec2> frame_y) {
    const Mat2 X = Mat2::from_columns(frame_x.first, frame_x.second);
    if (std::fabs(X.det()) < 1e-12) throw SingularFrame("source frame is (nearly) dependent");
    const Mat2 Y = Mat2::from_columns(frame_y.first, frame_y.second);
    return Y * X.inverse();
}

struct TingleyOptions {
    int profile_grid = 1024;
    int residual_grid = 2048;
    int curve_grid = 4096;
    double tol_rho = 1e-2;            // curvature-match tolerances, aligned with the
    double tol_tau = 5e-2;            // estimator accuracies
    double tol_half_length = 1e-6;
    double residual_hard_cap = 1e-2;  // extension residual beyond this means the matched
                                      // profiles were a coincidence of symmetry
};

struct IsometryReport {
    Mat2 F;
    double det = 0.0;
    double max_sphere_residual = 0.0; // max |  ||F r_X(s)||_Y - 1  |
    double frame_residual = 0.0;      // max ||F r_X(s) - r_Y(a s)||_Y
    double mismatch_rho = 0.0;        // curvature deltas for the chosen orientation
    double mismatch_tau = 0.0;
    int orientation = 1; // a in Phi(s) = a s
    bool has_reference = false;
    Mat2 reference;
    double reference_deviation = 0.0;
};

/// End-to-end sphere-isometry extension: builds the natural parameterizations
/// of X and Y (the Y basis is the given frame on S_Y), matches curvature
/// profiles in the direct orientation and, failing that, in the reversed one
/// (a = -1, the reflected parameterization r_Y(-s)), then constructs the
/// linear map from the s = 0 frames and reports how well it carries S_X onto
/// S_Y. Curvature disagreement in both orientations raises CurvatureMismatch.
inline IsometryReport tingley_check(const Norm2D& norm_x, const Norm2D& norm_y, Vec2 e1_y,
                                    Vec2 e2_y, const TingleyOptions& opts = {}) {
    if (std::fabs(norm_y(e1_y) - 1.0) > 1e-9 || std::fabs(norm_y(e2_y) - 1.0) > 1e-9)
        throw InvalidParameter("tingley_check frame vectors must lie on S_Y");
    const NaturalCurve curve_x(norm_x, opts.curve_grid);
    const Norm2D norm_y_framed(
        [norm_y](Vec2 v) { return norm_y(v); },
        norm_y.has_grad() ? std::optional<Norm2D::GradFn>([norm_y](Vec2 v) { return norm_y.grad(v); })
                          : std::nullopt,
        norm_y.smoothness(), Basis2D::from_vectors(e1_y, e2_y), norm_y.spec());
    const NaturalCurve curve_y(norm_y_framed, opts.curve_grid);

    const double Lx = curve_x.half_length(), Ly = curve_y.half_length();
    if (std::fabs(Lx - Ly) > opts.tol_half_length)
        throw CurvatureMismatch("half-lengths differ: " + std::to_string(Lx) + " vs " +
                                std::to_string(Ly));

    const int n = opts.profile_grid;
    double direct_rho = 0.0, direct_tau = 0.0, flipped_rho = 0.0, flipped_tau = 0.0;
    for (int i = 0; i < n; ++i) {
        const double s = 2.0 * Lx * i / n;
        const auto [rx, tx] = curvatures_at(curve_x, s);
        const auto [ry, ty] = curvatures_at(curve_y, s);
        direct_rho = std::max(direct_rho, std::fabs(rx - ry));
        direct_tau = std::max(direct_tau, std::fabs(tx - ty));
        const auto [ryf, tyf] = curvatures_at(curve_y, -s);
        flipped_rho = std::max(flipped_rho, std::fabs(rx - ryf));
        flipped_tau = std::max(flipped_tau, std::fabs(tx + tyf)); // tau flips sign under s -> -s
    }

    IsometryReport rep;
    if (direct_rho <= opts.tol_rho && direct_tau <= opts.tol_tau) {
        rep.orientation = 1;
        rep.mismatch_rho = direct_rho;
        rep.mismatch_tau = direct_tau;
    } else if (flipped_rho <= opts.tol_rho && flipped_tau <= opts.tol_tau) {
        rep.orientation = -1;
        rep.mismatch_rho = flipped_rho;
        rep.mismatch_tau = flipped_tau;
    } else {
        throw CurvatureMismatch("curvature profiles differ: max|drho|=" +
                                std::to_string(direct_rho) + ", max|dtau|=" +
                                std::to_string(direct_tau));
    }

    const double a = static_cast<double>(rep.orientation);
    rep.F = build_isometry({curve_x.point(0.0), curve_x.derivative(0.0)},
                           {curve_y.point(0.0), curve_y.derivative(0.0) * a});
    rep.det = rep.F.det();
    if (std::fabs(rep.det) < 1e-9) throw SingularFrame("recovered map is singular");

    for (int i = 0; i < opts.residual_grid; ++i) {
        const double s = 2.0 * Lx * i / opts.residual_grid;
        const Vec2 fx = rep.F.apply(curve_x.point(s));
        rep.max_sphere_residual =
            std::max(rep.max_sphere_residual, std::fabs(norm_y(fx) - 1.0));
        rep.frame_residual =
            std::max(rep.frame_residual, norm_y(fx - curve_y.point(a * s)));
    }
    if (rep.frame_residual > opts.residual_hard_cap)
        throw ReflectionAmbiguity("profiles matched but the extension residual is " +
                                  std::to_string(rep.frame_residual));
    return rep;
}

} // namespace minkgeo
