#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "minkgeo/errors.hpp"
#include "minkgeo/quadrature.hpp"
#include "minkgeo/vec2.hpp"

namespace minkgeo {

/// Basis of the plane together with its biorthogonal functionals.
/// Coordinates of v are (e1*(v), e2*(v)); the auxiliary Euclidean norm is the
/// 2-norm of those coordinates.
struct Basis2D {
    Vec2 e1{1.0, 0.0};
    Vec2 e2{0.0, 1.0};
    Vec2 e1_dual{1.0, 0.0}; // row covectors
    Vec2 e2_dual{0.0, 1.0};

    static Basis2D canonical() { return {}; }

    static Basis2D from_vectors(Vec2 e1, Vec2 e2) {
        const double d = cross(e1, e2);
        if (std::fabs(d) < 1e-14) throw InvalidParameter("basis vectors are (nearly) dependent");
        Basis2D b;
        b.e1 = e1;
        b.e2 = e2;
        b.e1_dual = Vec2{e2.y, -e2.x} / d;
        b.e2_dual = Vec2{-e1.y, e1.x} / d;
        return b;
    }

    Vec2 coords(Vec2 v) const { return {dot(e1_dual, v), dot(e2_dual, v)}; }
    Vec2 from_coords(Vec2 c) const { return c.x * e1 + c.y * e2; }
};

/// sqrt(e1*(v)^2 + e2*(v)^2) -- the Euclidean norm attached to the basis.
inline double aux_euclidean_norm(const Basis2D& basis, Vec2 v) {
    return basis.coords(v).norm2();
}

enum class Smoothness { C2, AC1, C1 };

inline const char* to_string(Smoothness s) {
    switch (s) {
        case Smoothness::C2: return "C2";
        case Smoothness::AC1: return "AC1";
        default: return "C1";
    }
}

/// A planar norm with a fixed basis. Immutable after construction; all
/// queries are pure.
class Norm2D {
public:
    using EvalFn = std::function<double(Vec2)>;
    using GradFn = std::function<Vec2(Vec2)>;

    Norm2D(EvalFn eval, std::optional<GradFn> grad, Smoothness smoothness, Basis2D basis,
           std::string spec)
        : eval_(std::move(eval)), grad_(std::move(grad)), smoothness_(smoothness), basis_(basis),
          spec_(std::move(spec)) {}

    double operator()(Vec2 v) const { return eval_(v); }
    bool has_grad() const { return grad_.has_value(); }

    /// Gradient of the norm at v != 0, as a covector. By Euler's identity for
    /// 1-homogeneous functions, grad(v) . v = ||v||.
    Vec2 grad(Vec2 v) const { return (*grad_)(v); }

    /// Central-difference gradient; the fallback when no analytic gradient is
    /// available, and the oracle used to cross-check the analytic one.
    Vec2 grad_fd(Vec2 v, double h = 1e-6) const {
        return {(eval_({v.x + h, v.y}) - eval_({v.x - h, v.y})) / (2.0 * h),
                (eval_({v.x, v.y + h}) - eval_({v.x, v.y - h})) / (2.0 * h)};
    }

    Smoothness smoothness() const { return smoothness_; }
    const Basis2D& basis() const { return basis_; }
    const std::string& spec() const { return spec_; }

private:
    EvalFn eval_;
    std::optional<GradFn> grad_;
    Smoothness smoothness_;
    Basis2D basis_;
    std::string spec_;
};

/// min/max of the norm over the auxiliary Euclidean unit circle.
struct NormConstants {
    double c = 1.0;
    double C = 1.0;
};

/// Samples ||e^{it}|| on a uniform grid and golden-section-refines every local
/// extremum bracket. 4096 samples bracket all extrema for the smooth norm
/// families in scope.
inline NormConstants norm_constants(const Norm2D& norm, int grid_size = 4096) {
    if (grid_size < 64) throw InvalidParameter("norm_constants needs grid_size >= 64");
    const double two_pi = 2.0 * M_PI;
    const auto g = [&](double t) {
        return norm(norm.basis().from_coords({std::cos(t), std::sin(t)}));
    };
    std::vector<double> values(static_cast<std::size_t>(grid_size));
    const double h = two_pi / grid_size;
    for (int i = 0; i < grid_size; ++i) {
        values[static_cast<std::size_t>(i)] = g(i * h);
        if (!(values[static_cast<std::size_t>(i)] > 0.0))
            throw DegenerateNorm("norm is <= 0 at t=" + std::to_string(i * h));
    }
    const auto at = [&](int i) {
        return values[static_cast<std::size_t>(((i % grid_size) + grid_size) % grid_size)];
    };
    double cmin = values[0], cmax = values[0];
    for (int i = 0; i < grid_size; ++i) {
        const double v = at(i);
        if (v <= at(i - 1) && v <= at(i + 1)) {
            const double t = golden_section_min(g, (i - 1) * h, (i + 1) * h);
            cmin = std::min(cmin, g(t));
        }
        if (v >= at(i - 1) && v >= at(i + 1)) {
            const double t = golden_section_min([&](double u) { return -g(u); }, (i - 1) * h, (i + 1) * h);
            cmax = std::max(cmax, g(t));
        }
    }
    return {cmin, cmax};
}

/// l_p norm on the canonical basis, 1 < p < inf. C2 for p >= 2, AC1 below.
inline Norm2D make_lp_norm(double p) {
    if (!(p > 1.0)) throw InvalidParameter("make_lp_norm requires p > 1");
    auto eval = [p](Vec2 v) -> double {
        const double ax = std::fabs(v.x), ay = std::fabs(v.y);
        const double m = std::max(ax, ay);
        if (m == 0.0) return 0.0;
        return m * std::pow(std::pow(ax / m, p) + std::pow(ay / m, p), 1.0 / p);
    };
    auto grad = [p, eval](Vec2 v) -> Vec2 {
        const double f = eval(v);
        const double gx = std::pow(std::fabs(v.x) / f, p - 1.0);
        const double gy = std::pow(std::fabs(v.y) / f, p - 1.0);
        return {std::copysign(gx, v.x), std::copysign(gy, v.y)};
    };
    const Smoothness sm = (p >= 2.0) ? Smoothness::C2 : Smoothness::AC1;
    return Norm2D(eval, grad, sm, Basis2D::canonical(), "lp:" + std::to_string(p));
}

/// The norm on the image space that makes the linear map A an isometry from
/// (X, base): ||y||_Y = ||A^{-1} y||_X. Basis vectors are the images of the
/// base basis, which keeps them on the new unit sphere.
inline Norm2D make_image_norm(const Norm2D& base, const Mat2& map) {
    if (std::fabs(map.det()) < 1e-12) throw InvalidParameter("image norm needs an invertible map");
    const Mat2 inv = map.inverse();
    auto eval = [base, inv](Vec2 y) { return base(inv.apply(y)); };
    std::optional<Norm2D::GradFn> grad;
    if (base.has_grad()) {
        grad = [base, inv](Vec2 y) -> Vec2 {
            const Vec2 g = base.grad(inv.apply(y)); // row covector composes with A^{-1}
            return {g.x * inv.a11 + g.y * inv.a21, g.x * inv.a12 + g.y * inv.a22};
        };
    }
    const Basis2D basis = Basis2D::from_vectors(map.apply(base.basis().e1),
                                                map.apply(base.basis().e2));
    return Norm2D(eval, grad, base.smoothness(), basis, base.spec() + ":image");
}

inline Norm2D make_euclidean_norm() {
    auto eval = [](Vec2 v) { return v.norm2(); };
    auto grad = [](Vec2 v) -> Vec2 {
        const double f = v.norm2();
        return {v.x / f, v.y / f};
    };
    return Norm2D(eval, grad, Smoothness::C2, Basis2D::canonical(), "euclidean");
}

/// Norm from a boundary-radius profile: ||v|| = |v| / h(arg v) with |.| the
/// ambient Euclidean norm. Requires a 2pi-periodic positive h whose induced
/// ball is centrally symmetric and convex; both are checked on a dense sample
/// grid and NonConvexProfile is raised on failure (an asymmetric profile does
/// not define a norm ball either, so it is rejected through the same error).
/// The stored basis is the canonical one rescaled onto the sphere.
inline Norm2D make_radial_norm(std::function<double(double)> profile, Smoothness smoothness,
                               int check_grid = 2048) {
    const double two_pi = 2.0 * M_PI;
    const double h = two_pi / check_grid;
    std::vector<Vec2> boundary(static_cast<std::size_t>(check_grid));
    for (int i = 0; i < check_grid; ++i) {
        const double th = i * h;
        const double r = profile(th);
        if (!(r > 0.0)) throw NonConvexProfile("profile must be positive, got h(" +
                                               std::to_string(th) + ")=" + std::to_string(r));
        boundary[static_cast<std::size_t>(i)] = {r * std::cos(th), r * std::sin(th)};
    }
    for (int i = 0; i < check_grid / 2; ++i) {
        const double a = profile(i * h), b = profile(i * h + M_PI);
        if (std::fabs(a - b) > 1e-7 * std::max(a, b))
            throw NonConvexProfile("profile is not centrally symmetric at theta=" +
                                   std::to_string(i * h));
    }
    // convexity of the sampled ball boundary: every edge turn must stay on one
    // side, up to a small fraction of the typical turn so that flat spots and
    // interpolation noise do not false-positive
    std::vector<double> turns(static_cast<std::size_t>(check_grid));
    double mean_turn = 0.0;
    for (int i = 0; i < check_grid; ++i) {
        const Vec2 a = boundary[static_cast<std::size_t>(i)];
        const Vec2 b = boundary[static_cast<std::size_t>((i + 1) % check_grid)];
        const Vec2 c = boundary[static_cast<std::size_t>((i + 2) % check_grid)];
        turns[static_cast<std::size_t>(i)] = cross(b - a, c - b);
        mean_turn += std::max(turns[static_cast<std::size_t>(i)], 0.0);
    }
    mean_turn /= check_grid;
    for (int i = 0; i < check_grid; ++i)
        if (turns[static_cast<std::size_t>(i)] < -2e-2 * mean_turn - 1e-13)
            throw NonConvexProfile("sampled ball boundary is concave near theta=" +
                                   std::to_string(i * h));
    auto eval = [profile](Vec2 v) -> double {
        const double r = v.norm2();
        if (r == 0.0) return 0.0;
        return r / profile(std::atan2(v.y, v.x));
    };
    auto grad = [eval](Vec2 v) -> Vec2 {
        const double step = 1e-6 * std::max(1.0, v.norm2());
        return {(eval({v.x + step, v.y}) - eval({v.x - step, v.y})) / (2.0 * step),
                (eval({v.x, v.y + step}) - eval({v.x, v.y - step})) / (2.0 * step)};
    };
    const Basis2D basis = Basis2D::from_vectors({profile(0.0), 0.0}, {0.0, profile(M_PI / 2.0)});
    return Norm2D(eval, grad, smoothness, basis, "radial");
}

} // namespace minkgeo
