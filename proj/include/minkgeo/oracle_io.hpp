#pragma once

#include <cmath>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "minkgeo/csv.hpp"
#include "minkgeo/errors.hpp"
#include "minkgeo/estimator.hpp"
#include "minkgeo/interp.hpp"
#include "minkgeo/norm_spec.hpp"
#include "minkgeo/vec2.hpp"

namespace minkgeo {

/// File-backed distance oracle: (s_i, r1, r2) samples of a measured sphere,
/// componentwise cubic interpolation in s. The gauge used to measure chords is
/// rebuilt from the samples themselves (they trace the unit ball boundary), so
/// nothing beyond the sample file is needed. Accuracy is bounded by the
/// sampling density, which makes this input suitable for the rho estimator but
/// not for the eps^3-scale psi' limits.
class SampledSphereOracle final : public DistanceOracle {
public:
    SampledSphereOracle(std::vector<double> s, std::vector<Vec2> pts)
        : norm_(build_gauge(pts)) {
        const std::size_t n = s.size();
        if (n < 16 || pts.size() != n)
            throw InvalidParameter("sampled sphere needs >= 16 matching rows");
        for (std::size_t i = 0; i + 1 < n; ++i)
            if (!(s[i + 1] > s[i])) throw InvalidParameter("sample parameters must increase");
        period_ = s.back() + (s.back() - s[n - 2]) - s.front();
        L_ = 0.5 * period_;
        s0_ = s.front();

        const std::size_t pad = std::max<std::size_t>(8, n / 8);
        std::vector<double> xs;
        std::vector<double> xr, yr;
        for (std::size_t k = 0; k < pad; ++k) {
            xs.push_back(s[n - pad + k] - period_);
            xr.push_back(pts[n - pad + k].x);
            yr.push_back(pts[n - pad + k].y);
        }
        for (std::size_t k = 0; k < n; ++k) {
            xs.push_back(s[k]);
            xr.push_back(pts[k].x);
            yr.push_back(pts[k].y);
        }
        for (std::size_t k = 0; k < pad; ++k) {
            xs.push_back(s[k] + period_);
            xr.push_back(pts[k].x);
            yr.push_back(pts[k].y);
        }
        rx_ = CubicSpline(xs, xr);
        ry_ = CubicSpline(xs, yr);

        const Vec2 gap = point_at(s0_) + point_at(s0_ + L_);
        if (gap.norm2() > 0.05)
            throw InvalidParameter("samples do not close antipodally (bad period?); residual " +
                                   format_double(gap.norm2()));
    }

    static SampledSphereOracle from_csv(const std::string& path) {
        const CsvTable t = CsvTable::read(path);
        const auto s = t.numeric_column("s");
        const auto r1 = t.numeric_column("r1");
        const auto r2 = t.numeric_column("r2");
        std::vector<Vec2> pts(s.size());
        for (std::size_t i = 0; i < s.size(); ++i) pts[i] = {r1[i], r2[i]};
        return SampledSphereOracle(s, std::move(pts));
    }

    double dist(double s1, double s2) const override {
        return norm_(point_at(s1) - point_at(s2));
    }
    double half_length() const override { return L_; }
    const Norm2D& gauge() const { return norm_; }

    Vec2 point_at(double s) const {
        double u = s - s0_;
        u -= std::floor(u / period_) * period_;
        return {rx_(s0_ + u), ry_(s0_ + u)};
    }

private:
    static Norm2D build_gauge(const std::vector<Vec2>& pts) {
        if (pts.size() < 16) throw InvalidParameter("sampled sphere needs >= 16 rows");
        std::vector<double> theta(pts.size()), h(pts.size());
        for (std::size_t i = 0; i < pts.size(); ++i) {
            theta[i] = std::atan2(pts[i].y, pts[i].x);
            h[i] = pts[i].norm2();
        }
        // unwrap to a single increasing turn; reverse if traversed clockwise
        bool reversed = false;
        if (pts.size() > 2) {
            const double turn = std::remainder(theta[1] - theta[0], 2.0 * M_PI);
            reversed = turn < 0.0;
        }
        if (reversed) {
            std::reverse(theta.begin(), theta.end());
            std::reverse(h.begin(), h.end());
        }
        for (std::size_t i = 1; i < theta.size(); ++i)
            while (theta[i] < theta[i - 1]) theta[i] += 2.0 * M_PI;
        while (!theta.empty() && theta.back() - theta.front() >= 2.0 * M_PI - 1e-9) {
            theta.pop_back();
            h.pop_back();
        }
        return make_radial_norm_from_samples(std::move(theta), std::move(h));
    }

    Norm2D norm_;
    double period_ = 0.0, L_ = 0.0, s0_ = 0.0;
    CubicSpline rx_, ry_;
};

/// CSV of natural-parameterization samples: columns s, r1, r2.
inline void write_sphere_samples_csv(const NaturalCurve& curve, int n, const std::string& path) {
    CsvTable t;
    t.comments.push_back("norm=" + curve.norm().spec());
    t.comments.push_back("L=" + format_double(curve.half_length()));
    t.columns = {"s", "r1", "r2"};
    const double two_L = 2.0 * curve.half_length();
    for (int i = 0; i < n; ++i) {
        const double s = two_L * i / n;
        const Vec2 r = curve.point(s);
        t.rows.push_back({format_double(s), format_double(r.x), format_double(r.y)});
    }
    t.write(path);
}

} // namespace minkgeo
