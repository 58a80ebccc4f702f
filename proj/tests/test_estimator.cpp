#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>

#include "minkgeo/curvature.hpp"
#include "minkgeo/estimator.hpp"
#include "minkgeo/oracle_io.hpp"
#include "testutil.hpp"

using namespace minkgeo;
using Catch::Approx;

namespace {

const std::vector<double> kSchedule{1e-2, 5e-3, 2.5e-3};

/// Oracle with the parameterization shifted by delta.
class ShiftedOracle final : public DistanceOracle {
public:
    ShiftedOracle(const DistanceOracle& base, double delta) : base_(&base), delta_(delta) {}
    double dist(double s1, double s2) const override {
        return base_->dist(s1 + delta_, s2 + delta_);
    }
    double half_length() const override { return base_->half_length(); }

private:
    const DistanceOracle* base_;
    double delta_;
};

/// Isometric straight-line stretch: what an arc looks like on a flat segment
/// of a sphere. Used to exercise the I-null branch consistently.
class FlatOracle final : public DistanceOracle {
public:
    double dist(double s1, double s2) const override { return std::fabs(s1 - s2); }
    double half_length() const override { return 4.0; }
};

/// rho values on a wide non-periodic window, for closed-form checks.
RhoGrid synthetic_grid(double lo, double hi, std::size_t n,
                       const std::function<double(double)>& f) {
    RhoGrid g;
    g.period = (hi - lo) * (static_cast<double>(n) + 1.0) / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double s = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
        g.s_grid.push_back(s);
        g.rho.push_back(f(s));
    }
    return g;
}

} // namespace

TEST_CASE("estimate_rho on the round sphere") {
    const NaturalCurve circle(make_euclidean_norm(), 1024);
    const CurveOracle oracle(circle);
    for (double s : testutil::linspace(0.0, 6.0, 13))
        CHECK(estimate_rho(oracle, s, kSchedule) == Approx(1.0).margin(1e-4));
}

TEST_CASE("estimate_rho matches the Cramer route for l4") {
    const NaturalCurve curve(make_lp_norm(4.0), 4096);
    const CurveOracle oracle(curve);
    CHECK(std::fabs(estimate_rho(oracle, 0.0, kSchedule)) <= 1e-2); // rho(0) = 0 at the axis
    for (double s : testutil::linspace(0.11, 3.0, 17)) {
        const auto [rho, tau] = curvatures_at(curve, s);
        const double rho_hat = estimate_rho(oracle, s, kSchedule);
        const double tol = (rho > 0.1) ? 1e-2 * rho : 1e-2;
        CHECK(rho_hat == Approx(rho).margin(tol));
        CHECK(rho_hat >= 0.0);
    }
}

TEST_CASE("estimate_rho is translation covariant") {
    const NaturalCurve curve(make_lp_norm(4.0), 4096);
    const CurveOracle oracle(curve);
    const double delta = 0.37;
    const ShiftedOracle shifted(oracle, delta);
    for (double s : testutil::linspace(0.2, 2.0, 7))
        CHECK(estimate_rho(shifted, s, kSchedule) ==
              Approx(estimate_rho(oracle, s + delta, kSchedule)).margin(1e-6));
}

TEST_CASE("estimate_rho schedule validation") {
    const NaturalCurve circle(make_euclidean_norm(), 512);
    const CurveOracle oracle(circle);
    CHECK_THROWS_AS(estimate_rho(oracle, 0.0, std::vector<double>{1e-2, 5e-3}), InvalidParameter);
    CHECK_THROWS_AS(estimate_rho(oracle, 0.0, std::vector<double>{5e-3, 1e-2, 2e-2}),
                    InvalidParameter);
    CHECK_THROWS_AS(estimate_rho(oracle, 0.0, std::vector<double>{2.0, 1.0, 0.5}),
                    InvalidParameter);

    // a blow-up point of l_1.5 is not in the asymptotic regime at this schedule
    const NaturalCurve spiky(make_lp_norm(1.5), 4096);
    const CurveOracle spiky_oracle(spiky);
    CHECK_THROWS_AS(estimate_rho(spiky_oracle, 2e-4, kSchedule), ScheduleTooCoarse);
}

TEST_CASE("helper integrals: closed forms") {
    const auto flat = synthetic_grid(-2.0, 2.0, 4001, [](double) { return 1.0; });
    for (double eps : {0.3, -0.3, 0.17}) {
        const auto v = helper_integrals(flat, 0.0, eps);
        CHECK(v.I == Approx(eps).margin(1e-9));
        CHECK(v.J == Approx(eps * eps / 2.0).margin(1e-7)); // J(-a) = +int_0^a rho(s-v) v dv
        CHECK(v.II == Approx(eps * eps / 2.0).margin(1e-7));
        CHECK(v.JJ == Approx(eps * eps * eps / 6.0).margin(1e-7));
    }

    const auto zero = synthetic_grid(-2.0, 2.0, 101, [](double) { return 0.0; });
    const auto vz = helper_integrals(zero, 0.0, 0.5);
    CHECK(vz.I == 0.0);
    CHECK(vz.II == 0.0);
    CHECK(vz.J == 0.0);
    CHECK(vz.JJ == 0.0);

    // rho(u) = u on the positive side: I = e^2/2, J = e^3/3, II = e^3/6, JJ = e^4/12
    const auto ramp = synthetic_grid(-2.0, 2.0, 8001, [](double u) { return std::max(u, 0.0); });
    const double e = 0.4;
    const auto vr = helper_integrals(ramp, 0.0, e);
    CHECK(vr.I == Approx(e * e / 2.0).margin(1e-7));
    CHECK(vr.J == Approx(e * e * e / 3.0).margin(1e-7));
    CHECK(vr.II == Approx(e * e * e / 6.0).margin(1e-7));
    CHECK(vr.JJ == Approx(e * e * e * e / 12.0).margin(1e-7));
}

TEST_CASE("helper integral identity eps*I = II + J", "[property]") {
    const auto [prof, super] = build_profile(make_lp_norm(4.0), 512);
    const RhoGrid grid = RhoGrid::from_profile(prof);
    for (int k = 0; k < 64; ++k) {
        const double s = testutil::uniform(0.0, 2.0 * prof.L);
        const double eps = testutil::uniform(-0.4, 0.4);
        if (std::fabs(eps) < 1e-3) continue;
        const auto v = helper_integrals(grid, s, eps);
        CHECK(eps * v.I == Approx(v.II + v.J).margin(1e-6));
        if (eps > 0.0) CHECK(v.I >= -1e-12); // I non-decreasing from rho >= 0
    }
}

TEST_CASE("classify_point") {
    const auto flat = synthetic_grid(-2.0, 2.0, 401, [](double) { return 1.0; });
    CHECK(classify_point(flat, 0.0, 0.1).kind == PointKind::rho_positive);

    const auto plateau = synthetic_grid(-2.0, 2.0, 4001, [](double u) {
        return std::fabs(u) < 0.5 ? 0.0 : (std::fabs(u) - 0.5);
    });
    const auto pc = classify_point(plateau, 0.0, 0.3);
    CHECK(pc.kind == PointKind::i_null);
    CHECK(pc.I_plus < 1e-12);
    CHECK(pc.I_minus < 1e-12);

    const auto parabola = synthetic_grid(-2.0, 2.0, 4001, [](double u) { return u * u; });
    CHECK(classify_point(parabola, 0.0, 0.3).kind == PointKind::i_positive);
    CHECK_THROWS_AS(classify_point(parabola, 0.0, -0.1), InvalidParameter);
}

TEST_CASE("invert_II") {
    const auto flat = synthetic_grid(-2.0, 2.0, 4001, [](double) { return 1.0; });
    const double e = 0.25;
    const auto [em, ep] = invert_II(flat, 0.0, e * e / 2.0, 1.0);
    CHECK(ep == Approx(e).margin(1e-6));
    CHECK(em == Approx(-e).margin(1e-6));

    // rho = u^2 about s: II(e) = e^4/12, so eps_plus = (12 level)^(1/4)
    const auto parabola = synthetic_grid(-2.0, 2.0, 8001, [](double u) { return u * u; });
    const double level = 2e-4;
    const auto [em2, ep2] = invert_II(parabola, 0.0, level, 1.0);
    CHECK(ep2 == Approx(std::pow(12.0 * level, 0.25)).margin(1e-5));
    CHECK(em2 == Approx(-std::pow(12.0 * level, 0.25)).margin(1e-5));

    const auto [em3, ep3] = invert_II(parabola, 0.0, 2.0 * level, 1.0);
    CHECK(ep3 > ep2); // larger level, larger |eps|
    CHECK(em3 < em2);

    CHECK_THROWS_AS(invert_II(parabola, 0.0, 1e6, 1.0), LevelOutOfRange);
}

TEST_CASE("estimate_psi_prime on the round sphere pins the cubic factor") {
    const NaturalCurve circle(make_euclidean_norm(), 1024);
    const CurveOracle oracle(circle);
    const auto flat = synthetic_grid(-0.5, 2.0 * M_PI + 0.5, 8001, [](double) { return 1.0; });
    for (double s : testutil::linspace(0.5, 5.5, 7)) {
        CHECK(estimate_psi_prime(oracle, flat, s, kSchedule) == Approx(0.0).margin(1e-3));
        // without the factor-3 correction the same limit lands near 2/3
        const double uncorrected = 1.0 + chord_defect_limit(oracle, flat.at(s), s, kSchedule);
        CHECK(std::fabs(uncorrected) > 0.5);
        CHECK(uncorrected == Approx(2.0 / 3.0).margin(1e-3));
    }
}

TEST_CASE("estimate_psi_prime is exactly 1 at I-null points") {
    const FlatOracle oracle;
    const auto plateau = synthetic_grid(-2.0, 10.0, 4001, [](double u) {
        return std::fabs(u - 2.0) < 0.5 ? 0.0 : std::max(0.0, std::fabs(u - 2.0) - 0.5);
    });
    CHECK(estimate_psi_prime(oracle, plateau, 2.0, kSchedule) == 1.0);
}

TEST_CASE("estimate_psi_prime tracks dpsi/ds for l4") {
    const NaturalCurve curve(make_lp_norm(4.0), 4096);
    const CurveOracle oracle(curve);
    const auto [prof, super] = build_profile(curve, 1024);
    const RhoGrid grid = RhoGrid::from_profile(prof);
    const PhaseShift phase(curve);
    const double h = 1e-4;
    for (double s : testutil::linspace(0.31, 1.2, 7)) {
        const auto [R1, T1] = supercurvatures_at(curve, phase, s - h);
        const auto [R2, T2] = supercurvatures_at(curve, phase, s + h);
        const double dpsi = (T2 / R2 - T1 / R1) / (2.0 * h);
        CHECK(estimate_psi_prime(oracle, grid, s, kSchedule) == Approx(dpsi).margin(5e-2));
    }
}

TEST_CASE("estimate_tau closed cases") {
    // round sphere: psi-hat' ~ 0 everywhere, so tau-hat ~ 0
    const NaturalCurve circle(make_euclidean_norm(), 1024);
    const CurveOracle oracle(circle);
    const auto result = run_estimate_pipeline(oracle, 32, kSchedule);
    for (double t : result.tau_hat) CHECK(t == Approx(0.0).margin(1e-3));

    std::vector<double> s{0.5, 1.5, 2.5}, rho{0.0, 0.0, 0.0}, psi{1.0, 1.0, 1.0};
    CHECK_THROWS_AS(estimate_tau(s, rho, psi, 3.0), DegenerateRho);
    std::vector<double> bad_s{0.5, 1.0, 2.5};
    CHECK_THROWS_AS(estimate_tau(bad_s, rho, psi, 3.0), InvalidParameter);
}

TEST_CASE("metric-only pipeline recovers rho and tau for l4") {
    const NaturalCurve curve(make_lp_norm(4.0), 4096);
    const CurveOracle oracle(curve);
    const int n = 128;
    const auto result = run_estimate_pipeline(oracle, n, kSchedule);
    const double L = result.L;

    double max_tau_ref = 0.0, max_tau_err = 0.0, max_rho_err = 0.0;
    for (int i = 0; i < n; ++i) {
        const double s = result.s[static_cast<std::size_t>(i)];
        const auto [rho, tau] = curvatures_at(curve, s);
        max_tau_ref = std::max(max_tau_ref, std::fabs(tau));
        max_tau_err =
            std::max(max_tau_err, std::fabs(result.tau_hat[static_cast<std::size_t>(i)] - tau));
        const double rho_err = std::fabs(result.rho_hat[static_cast<std::size_t>(i)] - rho);
        max_rho_err = std::max(max_rho_err, (rho > 0.1) ? rho_err / rho : rho_err);
    }
    CHECK(max_rho_err <= 1e-2);
    CHECK(max_tau_err <= 5e-2 * max_tau_ref);

    // the Floquet normalization zeroes the tau integral by construction
    double int_tau = 0.0;
    for (double t : result.tau_hat) int_tau += (L / n) * t;
    CHECK(std::fabs(int_tau) <= 1e-4 * L);

    // antipodal invariance within estimator tolerance
    for (double s : testutil::linspace(0.3, 1.2, 5))
        CHECK(estimate_rho(oracle, s + L, kSchedule) ==
              Approx(estimate_rho(oracle, s, kSchedule)).margin(1e-6));
}

TEST_CASE("second-order Taylor remainder vanishes (Lemma-style sanity)") {
    for (const auto& norm : {make_euclidean_norm(), make_lp_norm(4.0)}) {
        const NaturalCurve curve(norm, 2048);
        const double s = 0.83;
        const Vec2 r = curve.point(s);
        const Vec2 rp = curve.derivative(s);
        const Vec2 rpp = second_derivative(curve, s);
        double first = -1.0, prev = 1e300;
        for (double eps : {4e-2, 2e-2, 1e-2, 5e-3}) {
            const Vec2 rem = curve.point(s + eps) - r - rp * eps - rpp * (0.5 * eps * eps);
            const double ratio = norm(rem) / (eps * eps);
            CHECK(ratio < prev + 1e-12);
            if (first < 0.0) first = ratio;
            prev = ratio;
        }
        CHECK(prev < 0.3 * first); // remainder / eps^2 -> 0 under halving
    }
}

TEST_CASE("file-backed oracle matches the in-process one") {
    const NaturalCurve curve(make_lp_norm(4.0), 4096);
    const CurveOracle live(curve);
    const std::string path = "sampled_sphere_test.csv";
    write_sphere_samples_csv(curve, 4096, path);
    const auto sampled = SampledSphereOracle::from_csv(path);
    std::remove(path.c_str());

    CHECK(sampled.half_length() == Approx(curve.half_length()).margin(1e-6));
    for (int k = 0; k < 64; ++k) {
        const double a = testutil::uniform(0.0, 2.0 * curve.half_length());
        const double b = testutil::uniform(0.0, 2.0 * curve.half_length());
        CHECK(sampled.dist(a, b) == Approx(live.dist(a, b)).margin(1e-6));
    }
    // good enough for the rho estimator at the default schedule
    for (double s : testutil::linspace(0.4, 1.1, 4))
        CHECK(estimate_rho(sampled, s, kSchedule) ==
              Approx(estimate_rho(live, s, kSchedule)).margin(1e-3));
}
