#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "minkgeo/curvature.hpp"
#include "minkgeo/errors.hpp"
#include "minkgeo/sphere_param.hpp"
#include "minkgeo/vec2.hpp"

namespace minkgeo {

/// Pairwise-distance source on the sphere, parameterized by arc length. This
/// is the metric-only view: everything downstream of it sees distances and L,
/// never coordinates. Implementations must be pure and reentrant.
class DistanceOracle {
public:
    virtual ~DistanceOracle() = default;
    virtual double dist(double s1, double s2) const = 0;
    virtual double half_length() const = 0;
};

/// In-process oracle backed by a NaturalCurve.
class CurveOracle final : public DistanceOracle {
public:
    explicit CurveOracle(const NaturalCurve& curve) : curve_(&curve) {}
    double dist(double s1, double s2) const override {
        return curve_->norm()(curve_->point(s1) - curve_->point(s2));
    }
    double half_length() const override { return curve_->half_length(); }

private:
    const NaturalCurve* curve_;
};

/// Tabulated rho-hat on a periodic grid; linear interpolation between nodes.
struct RhoGrid {
    std::vector<double> s_grid; // sorted, spanning one period
    std::vector<double> rho;
    double period = 0.0;

    double at(double s) const {
        const double s0 = s_grid.front();
        double u = s - s0;
        u -= std::floor(u / period) * period;
        double sq = s0 + u;
        auto it = std::upper_bound(s_grid.begin(), s_grid.end(), sq);
        if (it == s_grid.begin()) {
            // before the first node: wrap to the (last, first+period) segment
            const double a = s_grid.back(), b = s_grid.front() + period;
            const double f = (sq + period - a) / (b - a);
            return rho.back() + f * (rho.front() - rho.back());
        }
        const std::size_t i = static_cast<std::size_t>(it - s_grid.begin()) - 1;
        if (i + 1 == s_grid.size()) {
            const double a = s_grid.back(), b = s_grid.front() + period;
            const double f = (sq - a) / (b - a);
            return rho.back() + f * (rho.front() - rho.back());
        }
        const double f = (sq - s_grid[i]) / (s_grid[i + 1] - s_grid[i]);
        return rho[i] + f * (rho[i + 1] - rho[i]);
    }

    static RhoGrid from_profile(const CurvatureProfile& prof) {
        return {prof.s_grid, prof.rho, 2.0 * prof.L};
    }
};

/// Recovered radial curvature at s:
///   rho(s) = lim (2 - ||r(s+eps) - r(s+L-eps)||) / eps^2
/// evaluated on the schedule and Richardson-extrapolated once (leading error
/// taken as O(eps)). Tiny negatives in [-1e-8, 0) are clamped to 0.
inline double estimate_rho(const DistanceOracle& oracle, double s, std::span<const double> schedule) {
    const double L = oracle.half_length();
    if (schedule.size() < 3) throw InvalidParameter("estimate_rho needs at least 3 eps values");
    for (std::size_t i = 0; i < schedule.size(); ++i) {
        if (!(schedule[i] > 0.0) || schedule[i] > 0.25 * L)
            throw InvalidParameter("eps schedule must lie in (0, L/4]");
        if (i > 0 && !(schedule[i] < schedule[i - 1]))
            throw InvalidParameter("eps schedule must be strictly decreasing");
    }
    std::vector<double> q(schedule.size());
    for (std::size_t i = 0; i < schedule.size(); ++i) {
        const double e = schedule[i];
        q[i] = (2.0 - oracle.dist(s + e, s + L - e)) / (e * e);
    }
    std::vector<double> extr(schedule.size() - 1);
    for (std::size_t i = 0; i + 1 < schedule.size(); ++i) {
        const double e0 = schedule[i], e1 = schedule[i + 1];
        extr[i] = (q[i + 1] * e0 - q[i] * e1) / (e0 - e1);
    }
    const double last = extr.back(), prev = extr[extr.size() - 2];
    if (std::fabs(last - prev) > 0.10 * std::max(std::fabs(last), std::fabs(prev)) + 1e-3)
        throw ScheduleTooCoarse("rho estimates disagree at s=" + std::to_string(s) + ": " +
                                std::to_string(prev) + " vs " + std::to_string(last));
    if (last < 0.0 && last >= -1e-8) return 0.0;
    return last;
}

/// The four helper integrals of the tabulated rho-hat around a base point:
///   I(eps)  = int_0^eps rho(s+u) du        J(eps)  = int_0^eps rho(s+u) u du
///   II(eps) = int_0^eps I(t) dt            JJ(eps) = int_0^eps J(t) dt
/// Cumulative nested trapezoid over a window [-w, w]; valid for |eps| <= w.
class HelperIntegrals {
public:
    HelperIntegrals(const RhoGrid& grid, double s, double window, int steps_per_side = 4096)
        : s_(s), w_(window), m_(steps_per_side) {
        if (!(window > 0.0)) throw InvalidParameter("helper-integral window must be positive");
        step_ = w_ / m_;
        Ip_.assign(m_ + 1, 0.0); Jp_.assign(m_ + 1, 0.0);
        IIp_.assign(m_ + 1, 0.0); JJp_.assign(m_ + 1, 0.0);
        In_ = Ip_; Jn_ = Jp_; IIn_ = IIp_; JJn_ = JJp_;
        double fp_prev = grid.at(s), fn_prev = fp_prev;
        for (int k = 1; k <= m_; ++k) {
            const double u = k * step_, up = u - step_;
            const double fp = grid.at(s + u), fn = grid.at(s - u);
            Ip_[k] = Ip_[k - 1] + 0.5 * step_ * (fp_prev + fp);
            Jp_[k] = Jp_[k - 1] + 0.5 * step_ * (fp_prev * up + fp * u);
            In_[k] = In_[k - 1] - 0.5 * step_ * (fn_prev + fn);
            Jn_[k] = Jn_[k - 1] + 0.5 * step_ * (fn_prev * up + fn * u);
            IIp_[k] = IIp_[k - 1] + 0.5 * step_ * (Ip_[k - 1] + Ip_[k]);
            JJp_[k] = JJp_[k - 1] + 0.5 * step_ * (Jp_[k - 1] + Jp_[k]);
            IIn_[k] = IIn_[k - 1] - 0.5 * step_ * (In_[k - 1] + In_[k]);
            JJn_[k] = JJn_[k - 1] - 0.5 * step_ * (Jn_[k - 1] + Jn_[k]);
            fp_prev = fp; fn_prev = fn;
        }
    }

    double I(double eps) const { return lookup(Ip_, In_, eps); }
    double J(double eps) const { return lookup(Jp_, Jn_, eps); }
    double II(double eps) const { return lookup(IIp_, IIn_, eps); }
    double JJ(double eps) const { return lookup(JJp_, JJn_, eps); }
    double window() const { return w_; }

    /// Solves II(eps_minus) = level = II(eps_plus) with eps_minus < 0 < eps_plus;
    /// II is strictly monotone away from 0 on each side, so plain bisection to
    /// 1e-12 suffices.
    std::pair<double, double> invert_level(double level) const {
        if (!(level > 0.0)) throw InvalidParameter("II level must be positive");
        if (II(w_) < level || II(-w_) < level)
            throw LevelOutOfRange("II level " + std::to_string(level) +
                                  " not reachable within window " + std::to_string(w_));
        const auto solve = [&](double lo, double hi, bool positive_side) {
            for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
                const double mid = 0.5 * (lo + hi);
                const double val = II(positive_side ? mid : -mid);
                if (val < level) lo = mid; else hi = mid;
            }
            return 0.5 * (lo + hi);
        };
        const double ep = solve(0.0, w_, true);
        const double em = -solve(0.0, w_, false);
        return {em, ep};
    }

private:
    double lookup(const std::vector<double>& pos, const std::vector<double>& neg, double eps) const {
        const std::vector<double>& arr = (eps >= 0.0) ? pos : neg;
        const double a = std::fabs(eps);
        if (a > w_ * (1.0 + 1e-12))
            throw InvalidParameter("helper integral queried outside its window");
        const double u = std::min(a / step_, static_cast<double>(m_));
        const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(u), m_ - 1);
        const double f = u - static_cast<double>(k);
        return arr[k] + f * (arr[k + 1] - arr[k]);
    }

    double s_, w_, step_;
    int m_;
    std::vector<double> Ip_, Jp_, IIp_, JJp_;
    std::vector<double> In_, Jn_, IIn_, JJn_;
};

struct HelperValues {
    double I, II, J, JJ;
};

inline HelperValues helper_integrals(const RhoGrid& grid, double s, double eps,
                                     int steps_per_side = 4096) {
    const HelperIntegrals h(grid, s, std::fabs(eps) * (1.0 + 1e-9), steps_per_side);
    return {h.I(eps), h.II(eps), h.J(eps), h.JJ(eps)};
}

enum class PointKind { rho_positive, i_null, i_positive };

inline const char* to_string(PointKind k) {
    switch (k) {
        case PointKind::rho_positive: return "rho_positive";
        case PointKind::i_null: return "i_null";
        default: return "i_positive";
    }
}

struct PointClass {
    PointKind kind;
    double rho_at_s;
    double I_plus;  // int_0^probe rho(s+u) du
    double I_minus; // int_0^probe rho(s-u) du
};

/// Three-way case split driving the psi' estimator. The defaults keep the
/// classification stable under oracle noise of about 1e-10.
inline PointClass classify_point(const RhoGrid& grid, double s, double probe_eps,
                                 double null_tol = 1e-8, double rho_threshold = 1e-4) {
    if (!(probe_eps > 0.0)) throw InvalidParameter("probe_eps must be positive");
    const double rho_at = grid.at(s);
    const HelperIntegrals h(grid, s, probe_eps * (1.0 + 1e-9), 1024);
    const double ip = h.I(probe_eps);
    const double im = -h.I(-probe_eps);
    PointClass pc{PointKind::i_positive, rho_at, ip, im};
    if (rho_at > rho_threshold) pc.kind = PointKind::rho_positive;
    else if (std::max(ip, im) < null_tol) pc.kind = PointKind::i_null;
    return pc;
}

/// (eps_minus, eps_plus) with II_s(eps_minus) = level = II_s(eps_plus).
inline std::pair<double, double> invert_II(const RhoGrid& grid, double s, double level,
                                           double window, int steps_per_side = 4096) {
    const HelperIntegrals h(grid, s, window, steps_per_side);
    return h.invert_level(level);
}

/// Extrapolated limit of (||r(s+eps) - r(s-eps)|| - 2 eps) / (rho(s) eps^3)
/// over the schedule. The chord-defect expansion carries the raw factor; the
/// psi' estimator applies its cubic-term correction on top.
inline double chord_defect_limit(const DistanceOracle& oracle, double rho_at_s, double s,
                                 std::span<const double> schedule) {
    if (schedule.size() < 2) throw InvalidParameter("chord defect needs at least 2 eps values");
    if (!(rho_at_s > 0.0)) throw InvalidParameter("chord defect requires rho(s) > 0");
    std::vector<double> g(schedule.size());
    for (std::size_t i = 0; i < schedule.size(); ++i) {
        const double e = schedule[i];
        g[i] = (oracle.dist(s + e, s - e) - 2.0 * e) / (rho_at_s * e * e * e);
    }
    std::vector<double> extr(schedule.size() - 1);
    for (std::size_t i = 0; i + 1 < schedule.size(); ++i) {
        const double e0 = schedule[i], e1 = schedule[i + 1];
        extr[i] = (g[i + 1] * e0 - g[i] * e1) / (e0 - e1);
    }
    if (extr.size() >= 2) {
        const double last = extr.back(), prev = extr[extr.size() - 2];
        if (std::fabs(last - prev) > 0.10 * std::max(std::fabs(last), std::fabs(prev)) + 0.05)
            throw ScheduleTooCoarse("chord-defect estimates disagree at s=" + std::to_string(s));
    }
    return extr.back();
}

struct PsiPrimeOptions {
    double null_tol = 1e-8;
    double rho_threshold = 1e-4;
    int helper_steps = 4096;
};

/// psi'(s) from distances alone, by the three-case rule:
///   rho(s) > 0:  psi' = 1 + 3 * lim (dist(s+e, s-e) - 2e)/(rho(s) e^3).
///                The factor 3 compensates the 1/3 in the chord-defect cubic
///                term; the round sphere (psi' = 0) pins it.
///   I-null:      psi' = 1 exactly.
///   I-positive:  psi' = 1 + lim over level->0 of
///                (dist(s+e+, s+e-) - (e+ - e-)) / (JJ(e+) - JJ(e-)),
///                with (e-, e+) the II level set; levels taken as II(eps_k).
inline double estimate_psi_prime(const DistanceOracle& oracle, const RhoGrid& grid, double s,
                                 std::span<const double> schedule,
                                 const PsiPrimeOptions& opts = {}) {
    if (schedule.empty()) throw InvalidParameter("estimate_psi_prime needs a schedule");
    const PointClass pc =
        classify_point(grid, s, schedule.front(), opts.null_tol, opts.rho_threshold);
    switch (pc.kind) {
        case PointKind::i_null:
            return 1.0;
        case PointKind::rho_positive:
            return 1.0 + 3.0 * chord_defect_limit(oracle, pc.rho_at_s, s, schedule);
        case PointKind::i_positive:
        default: {
            const double L = oracle.half_length();
            const double w = std::min(0.25 * L, 16.0 * schedule.front());
            const HelperIntegrals h(grid, s, w, opts.helper_steps);
            std::vector<double> est;
            for (double e : schedule) {
                const double level = h.II(e);
                if (!(level > 0.0)) continue;
                const auto [em, ep] = h.invert_level(level);
                const double denom = h.JJ(ep) - h.JJ(em);
                if (!(denom > 0.0)) continue;
                est.push_back((oracle.dist(s + ep, s + em) - (ep - em)) / denom);
            }
            if (est.empty())
                throw ScheduleTooCoarse("no usable II levels at I-positive point s=" +
                                        std::to_string(s));
            if (est.size() >= 2) {
                const double last = est.back(), prev = est[est.size() - 2];
                if (std::fabs(last - prev) > 0.10 * std::max(std::fabs(last), std::fabs(prev)) + 0.05)
                    throw ScheduleTooCoarse("I-positive estimates disagree at s=" +
                                            std::to_string(s));
            }
            return 1.0 + est.back();
        }
    }
}

/// Tangential curvature from tabulated rho-hat and psi'-hat on a uniform grid
/// over [0, L):
///   tau(s) = rho(s) * (psi(0) + int_0^s psi'),
///   psi(0) = - (int_0^L rho(u) int_0^u psi'(v) dv du) / (int_0^L rho(u) du).
/// The normalization makes the composite int_0^L tau vanish identically, which
/// is the Floquet-style closure condition for the sphere.
inline std::vector<double> estimate_tau(std::span<const double> s_grid,
                                        std::span<const double> rho_hat,
                                        std::span<const double> psi_prime_hat, double L) {
    const std::size_t n = s_grid.size();
    if (n < 2 || rho_hat.size() != n || psi_prime_hat.size() != n)
        throw InvalidParameter("estimate_tau needs matching grids with >= 2 points");
    const double h = s_grid[1] - s_grid[0];
    for (std::size_t i = 0; i + 1 < n; ++i)
        if (std::fabs(s_grid[i + 1] - s_grid[i] - h) > 1e-9 * L)
            throw InvalidParameter("estimate_tau expects a uniform grid");

    std::vector<double> Psi(n); // int_0^{s_i} psi'
    Psi[0] = s_grid[0] * psi_prime_hat[0];
    for (std::size_t i = 0; i + 1 < n; ++i)
        Psi[i + 1] = Psi[i] + 0.5 * h * (psi_prime_hat[i] + psi_prime_hat[i + 1]);

    double B = 0.0, A = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        B += h * rho_hat[i];
        A += h * rho_hat[i] * Psi[i];
    }
    if (B <= 1e-10)
        throw DegenerateRho("int_0^L rho = " + std::to_string(B) + "; oracle violates rho > 0");
    const double psi0 = -A / B;

    std::vector<double> tau(n);
    for (std::size_t i = 0; i < n; ++i) tau[i] = rho_hat[i] * (psi0 + Psi[i]);
    return tau;
}

struct EstimateResult {
    std::vector<double> s;
    std::vector<double> rho_hat;
    std::vector<PointClass> cls;
    std::vector<double> psi_prime_hat;
    std::vector<double> tau_hat;
    double L = 0.0;
};

/// Full metric-only pipeline: rho-hat on a half-offset uniform grid over
/// [0, L), classification, psi'-hat, tau-hat. Self-contained given only the
/// oracle.
inline EstimateResult run_estimate_pipeline(const DistanceOracle& oracle, int n_points,
                                            std::span<const double> schedule,
                                            const PsiPrimeOptions& opts = {}) {
    if (n_points < 8) throw InvalidParameter("pipeline needs at least 8 grid points");
    EstimateResult out;
    out.L = oracle.half_length();
    const double h = out.L / n_points;
    const std::size_t n = static_cast<std::size_t>(n_points);
    out.s.resize(n);
    out.rho_hat.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.s[i] = (static_cast<double>(i) + 0.5) * h; // half-offset keeps grid points generic
        out.rho_hat[i] = estimate_rho(oracle, out.s[i], schedule);
    }
    const RhoGrid grid{out.s, out.rho_hat, out.L};
    out.cls.reserve(n);
    out.psi_prime_hat.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.cls.push_back(
            classify_point(grid, out.s[i], schedule.front(), opts.null_tol, opts.rho_threshold));
        out.psi_prime_hat[i] = estimate_psi_prime(oracle, grid, out.s[i], schedule, opts);
    }
    out.tau_hat = estimate_tau(out.s, out.rho_hat, out.psi_prime_hat, out.L);
    return out;
}

} // namespace minkgeo
