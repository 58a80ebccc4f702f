// minkgeo command-line front end: curvature profiles, metric-only estimation,
// sphere reconstruction, isometry extension, and intrinsic-metric checks for
// unit spheres of smooth planar norms.

#include <cstdio>
#include <iostream>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "minkgeo/csv.hpp"
#include "minkgeo/curvature.hpp"
#include "minkgeo/errors.hpp"
#include "minkgeo/estimator.hpp"
#include "minkgeo/intrinsic.hpp"
#include "minkgeo/norm_spec.hpp"
#include "minkgeo/oracle_io.hpp"
#include "minkgeo/reconstruct.hpp"
#include "minkgeo/svg.hpp"

using namespace minkgeo;
using nlohmann::json;

namespace {

Vec2 parse_vec2(const std::string& s) {
    double x = 0.0, y = 0.0;
    if (std::sscanf(s.c_str(), "%lf,%lf", &x, &y) != 2)
        throw InvalidParameter("expected 'x,y', got '" + s + "'");
    return {x, y};
}

Mat2 parse_mat2(const std::string& s) {
    json j;
    try {
        j = json::parse(s);
    } catch (const json::exception& e) {
        throw InvalidParameter(std::string("bad matrix JSON: ") + e.what());
    }
    if (!j.is_array() || j.size() != 2 || j[0].size() != 2 || j[1].size() != 2)
        throw InvalidParameter("matrix must be [[a,b],[c,d]]");
    return {j[0][0].get<double>(), j[0][1].get<double>(), j[1][0].get<double>(),
            j[1][1].get<double>()};
}

std::vector<double> parse_schedule(const std::string& s) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos < s.size()) {
        std::size_t next = s.find(',', pos);
        if (next == std::string::npos) next = s.size();
        out.push_back(std::stod(s.substr(pos, next - pos)));
        pos = next + 1;
    }
    return out;
}

json mat_to_json(const Mat2& m) {
    return json::array({json::array({m.a11, m.a12}), json::array({m.a21, m.a22})});
}

void write_json(const json& j, const std::string& path) {
    if (path.empty()) return;
    std::ofstream out(path);
    if (!out) throw InvalidParameter("cannot open for writing: " + path);
    out << j.dump(2) << "\n";
}

void profile_metadata(CsvTable& t, const Norm2D& norm, const NormConstants& k, double L,
                      int grid) {
    t.comments.push_back("norm=" + norm.spec());
    t.comments.push_back("smoothness=" + std::string(to_string(norm.smoothness())));
    t.comments.push_back("c=" + format_double(k.c));
    t.comments.push_back("C=" + format_double(k.C));
    t.comments.push_back("L=" + format_double(L));
    t.comments.push_back("grid=" + std::to_string(grid));
    t.comments.push_back("grid_policy=uniform over [0,2L); AC1 norms drop 1e-3 bands at axes");
}

int cmd_curvature(const std::string& norm_spec, int grid, const std::string& out,
                  const std::string& svg, const std::string& curve_out,
                  const std::string& table_out) {
    const Norm2D norm = parse_norm_spec(norm_spec);
    const NaturalCurve curve(norm, 4096);
    const auto [prof, super] = build_profile(curve, grid);
    const auto k = norm_constants(norm);

    CsvTable t;
    profile_metadata(t, norm, k, prof.L, grid);
    t.columns = {"s", "rho", "tau", "Rho", "Tau", "psi", "phi"};
    for (std::size_t i = 0; i < prof.s_grid.size(); ++i)
        t.rows.push_back({format_double(prof.s_grid[i]), format_double(prof.rho[i]),
                          format_double(prof.tau[i]), format_double(super.Rho[i]),
                          format_double(super.Tau[i]), format_double(super.psi[i]),
                          format_double(super.phi[i])});
    if (!out.empty()) t.write(out);

    if (!table_out.empty()) {
        CsvTable ts;
        ts.comments.push_back("norm=" + norm.spec());
        ts.columns = {"t", "s"};
        const auto& tg = curve.table().t_grid();
        const auto& sv = curve.table().s_values();
        for (std::size_t i = 0; i < tg.size(); ++i)
            ts.rows.push_back({format_double(tg[i]), format_double(sv[i])});
        ts.write(table_out);
    }
    if (!curve_out.empty()) {
        CsvTable tc;
        tc.comments.push_back("norm=" + norm.spec());
        tc.comments.push_back("L=" + format_double(prof.L));
        tc.columns = {"s", "r1", "r2", "r1p", "r2p"};
        for (int i = 0; i < grid; ++i) {
            const double s = 2.0 * prof.L * i / grid;
            const Vec2 r = curve.point(s), rp = curve.derivative(s);
            tc.rows.push_back({format_double(s), format_double(r.x), format_double(r.y),
                               format_double(rp.x), format_double(rp.y)});
        }
        tc.write(curve_out);
    }
    if (!svg.empty()) {
        SvgPlot plot(640, 400);
        plot.add_series(prof.s_grid, prof.rho, "#c0392b", 1.5);
        plot.add_series(prof.s_grid, prof.tau, "#2980b9", 1.5);
        plot.write(svg);
    }
    std::cout << "L=" << format_double(prof.L) << " c=" << format_double(k.c)
              << " C=" << format_double(k.C) << " points=" << prof.s_grid.size() << "\n";
    return 0;
}

int cmd_estimate(const std::string& norm_spec, const std::string& oracle_path, int grid,
                 const std::string& eps_list, double rho_threshold, double null_tol,
                 const std::string& out, const std::string& compare_out,
                 const std::string& svg) {
    const std::vector<double> schedule = parse_schedule(eps_list);
    PsiPrimeOptions opts;
    opts.rho_threshold = rho_threshold;
    opts.null_tol = null_tol;

    std::unique_ptr<NaturalCurve> curve;
    std::unique_ptr<DistanceOracle> oracle;
    if (!oracle_path.empty()) {
        oracle = std::make_unique<SampledSphereOracle>(SampledSphereOracle::from_csv(oracle_path));
    } else if (!norm_spec.empty()) {
        curve = std::make_unique<NaturalCurve>(parse_norm_spec(norm_spec), 4096);
        oracle = std::make_unique<CurveOracle>(*curve);
    } else {
        throw InvalidParameter("estimate needs --norm or --oracle");
    }

    const EstimateResult res = run_estimate_pipeline(*oracle, grid, schedule, opts);

    CsvTable t;
    t.comments.push_back(norm_spec.empty() ? "oracle=" + oracle_path : "norm=" + norm_spec);
    t.comments.push_back("L=" + format_double(res.L));
    t.comments.push_back("eps_schedule=" + eps_list);
    t.columns = {"s", "rho_hat", "class", "psi_prime_hat", "tau_hat"};
    for (std::size_t i = 0; i < res.s.size(); ++i)
        t.rows.push_back({format_double(res.s[i]), format_double(res.rho_hat[i]),
                          to_string(res.cls[i].kind), format_double(res.psi_prime_hat[i]),
                          format_double(res.tau_hat[i])});
    if (!out.empty()) t.write(out);

    if (curve) {
        // comparison against the analytic (Cramer) route
        double max_rho_err = 0.0, max_tau_err = 0.0, max_tau_ref = 0.0;
        CsvTable cmp;
        cmp.columns = {"s", "rho_hat", "rho_cramer", "tau_hat", "tau_cramer"};
        for (std::size_t i = 0; i < res.s.size(); ++i) {
            const auto [rho, tau] = curvatures_at(*curve, res.s[i]);
            const double rerr = std::fabs(res.rho_hat[i] - rho);
            max_rho_err = std::max(max_rho_err, rho > 0.1 ? rerr / rho : rerr);
            max_tau_err = std::max(max_tau_err, std::fabs(res.tau_hat[i] - tau));
            max_tau_ref = std::max(max_tau_ref, std::fabs(tau));
            cmp.rows.push_back({format_double(res.s[i]), format_double(res.rho_hat[i]),
                                format_double(rho), format_double(res.tau_hat[i]),
                                format_double(tau)});
        }
        if (!compare_out.empty()) cmp.write(compare_out);
        std::cout << "max_rho_err=" << format_double(max_rho_err)
                  << " (abs, rel where rho>0.1)\n"
                  << "max_tau_err=" << format_double(max_tau_err)
                  << " max_tau_ref=" << format_double(max_tau_ref) << "\n";
    }
    if (!svg.empty()) {
        SvgPlot plot(640, 400);
        plot.add_series(res.s, res.rho_hat, "#c0392b", 1.5);
        plot.add_series(res.s, res.tau_hat, "#2980b9", 1.5);
        plot.write(svg);
    }
    std::cout << "points=" << res.s.size() << " L=" << format_double(res.L) << "\n";
    return 0;
}

int cmd_reconstruct(const std::string& profile_path, double step_frac, double smax_mult,
                    const std::string& r0_s, const std::string& r0p_s, const std::string& out,
                    const std::string& svg) {
    const CsvTable t = CsvTable::read(profile_path);
    const auto s = t.numeric_column("s");
    const auto rho = t.numeric_column("rho");
    const auto tau = t.numeric_column("tau");
    if (s.size() < 8) throw InvalidParameter("profile CSV has too few rows");
    double L = 0.0;
    for (const auto& c : t.comments)
        if (c.rfind("L=", 0) == 0) L = std::stod(c.substr(2));
    if (L == 0.0) L = 0.5 * (s.back() + (s.back() - s[s.size() - 2]));

    const Vec2 r0 = parse_vec2(r0_s), r0p = parse_vec2(r0p_s);
    const CoeffFn rho_fn = make_periodic_coeff(s, rho, 2.0 * L);
    const CoeffFn tau_fn = make_periodic_coeff(s, tau, 2.0 * L);
    const auto rec = integrate_sphere(rho_fn, tau_fn, r0, r0p, smax_mult * L, step_frac * L, L);

    if (!out.empty()) {
        CsvTable tc;
        tc.comments.push_back("profile=" + profile_path);
        tc.comments.push_back("L=" + format_double(L));
        tc.columns = {"s", "r1", "r2", "r1p", "r2p"};
        for (std::size_t i = 0; i < rec.s_grid.size(); ++i)
            tc.rows.push_back({format_double(rec.s_grid[i]), format_double(rec.r[i].x),
                               format_double(rec.r[i].y), format_double(rec.r_prime[i].x),
                               format_double(rec.r_prime[i].y)});
        tc.write(out);
    }
    if (!svg.empty()) {
        SvgPlot plot(480, 480);
        plot.add_curve(rec.r, "#27ae60", 1.5);
        plot.write(svg);
    }
    json report{{"L", L},
                {"step", step_frac * L},
                {"s_max", smax_mult * L},
                {"antipodal_residual", rec.antipodal_residual},
                {"periodic_residual", rec.periodic_residual}};
    std::cout << report.dump(2) << "\n";
    return 0;
}

int cmd_tingley(const std::string& norm_x_spec, const std::string& norm_y_spec,
                const std::string& map_s, const std::string& e1y_s, const std::string& e2y_s,
                double tol_rho, double tol_tau, const std::string& out) {
    const Norm2D norm_x = parse_norm_spec(norm_x_spec);
    TingleyOptions opts;
    opts.tol_rho = tol_rho;
    opts.tol_tau = tol_tau;
    IsometryReport rep;
    if (!map_s.empty()) {
        // ground-truth mode: Y is the image of X under the given map
        const Mat2 A = parse_mat2(map_s);
        const Norm2D norm_y = make_image_norm(norm_x, A);
        rep = tingley_check(norm_x, norm_y, A.apply(norm_x.basis().e1),
                            A.apply(norm_x.basis().e2), opts);
        rep.has_reference = true;
        rep.reference = A;
        rep.reference_deviation = max_abs_entry_diff(rep.F, A);
    } else if (!norm_y_spec.empty()) {
        const Norm2D norm_y = parse_norm_spec(norm_y_spec);
        Vec2 e1y = norm_y.basis().e1, e2y = norm_y.basis().e2;
        if (!e1y_s.empty()) e1y = parse_vec2(e1y_s);
        if (!e2y_s.empty()) e2y = parse_vec2(e2y_s);
        rep = tingley_check(norm_x, norm_y, e1y, e2y, opts);
    } else {
        throw InvalidParameter("tingley needs --map or --norm-y");
    }
    json report;
    report["F"] = mat_to_json(rep.F);
    report["det"] = rep.det;
    report["max_sphere_residual"] = rep.max_sphere_residual;
    report["frame_residual"] = rep.frame_residual;
    report["curvature_mismatch"] = json{{"rho", rep.mismatch_rho}, {"tau", rep.mismatch_tau}};
    report["orientation"] = rep.orientation;
    if (rep.has_reference) {
        report["reference"] = mat_to_json(rep.reference);
        report["reference_deviation"] = rep.reference_deviation;
    }
    write_json(report, out);
    std::cout << report.dump(2) << "\n";
    return 0;
}

int cmd_intrinsic(const std::string& norm_spec, int pairs, int levels, unsigned seed,
                  const std::string& out) {
    const Norm2D norm = parse_norm_spec(norm_spec);
    const NaturalCurve curve(norm, 4096);
    const double L = curve.half_length();
    std::mt19937 gen(seed);
    std::uniform_real_distribution<double> pick(0.0, 2.0 * L);
    std::uniform_real_distribution<double> gap(1e-3, L);

    CsvTable t;
    t.comments.push_back("norm=" + norm.spec());
    t.comments.push_back("L=" + format_double(L));
    t.comments.push_back("levels=" + std::to_string(levels));
    t.columns = {"a", "b", "residual"};
    double worst = 0.0;
    for (int k = 0; k < pairs; ++k) {
        const double a = pick(gen);
        const double b = a + gap(gen);
        const double residual = verify_natural_isometry(curve, a, b, levels);
        worst = std::max(worst, residual);
        t.rows.push_back({format_double(a), format_double(b), format_double(residual)});
    }
    if (!out.empty()) t.write(out);
    std::cout << "pairs=" << pairs << " max_residual=" << format_double(worst) << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"intrinsic geometry of unit spheres of smooth planar norms"};
    app.require_subcommand(1);

    auto* curvature = app.add_subcommand("curvature", "tabulate (rho, tau, Rho, Tau, psi, phi)");
    std::string c_norm, c_out, c_svg, c_curve_out, c_table_out;
    int c_grid = 1024;
    curvature->add_option("--norm", c_norm, "norm spec: euclidean | lp:<p> | @file.json")
        ->required();
    curvature->add_option("--grid", c_grid, "profile grid size");
    curvature->add_option("--out", c_out, "profile CSV path");
    curvature->add_option("--svg", c_svg, "optional SVG plot of rho/tau");
    curvature->add_option("--curve-out", c_curve_out, "CSV of (s, r, r')");
    curvature->add_option("--table-out", c_table_out, "CSV of (t, s(t))");

    auto* estimate = app.add_subcommand("estimate", "metric-only recovery of rho, psi', tau");
    std::string e_norm, e_oracle, e_eps = "1e-2,5e-3,2.5e-3", e_out, e_cmp, e_svg;
    int e_grid = 256;
    double e_rho_threshold = 1e-4, e_null_tol = 1e-8;
    estimate->add_option("--norm", e_norm, "norm spec for the in-process oracle");
    estimate->add_option("--oracle", e_oracle, "CSV of (s, r1, r2) sphere samples");
    estimate->add_option("--grid", e_grid, "number of sample points on [0, L)");
    estimate->add_option("--eps", e_eps, "comma-separated decreasing eps schedule");
    estimate->add_option("--rho-threshold", e_rho_threshold, "classification threshold on rho");
    estimate->add_option("--null-tol", e_null_tol, "I-null tolerance");
    estimate->add_option("--out", e_out, "estimates CSV path");
    estimate->add_option("--compare-out", e_cmp, "per-point comparison CSV (needs --norm)");
    estimate->add_option("--svg", e_svg, "optional SVG plot");

    auto* reconstruct = app.add_subcommand("reconstruct", "integrate r'' = -rho r + tau r'");
    std::string r_profile, r_out, r_svg, r_r0 = "1,0", r_r0p = "0,1";
    double r_step = 1e-4, r_smax = 2.0;
    reconstruct->add_option("--profile", r_profile, "profile CSV with s,rho,tau")->required();
    reconstruct->add_option("--step-frac", r_step, "RK4 step as a fraction of L");
    reconstruct->add_option("--smax-mult", r_smax, "integration span as a multiple of L");
    reconstruct->add_option("--r0", r_r0, "initial point 'x,y'");
    reconstruct->add_option("--r0p", r_r0p, "initial tangent 'x,y'");
    reconstruct->add_option("--out", r_out, "curve CSV path");
    reconstruct->add_option("--svg", r_svg, "optional SVG of the reconstructed sphere");

    auto* tingley = app.add_subcommand("tingley", "extend a sphere isometry to a linear map");
    std::string t_norm_x, t_norm_y, t_map, t_e1y, t_e2y, t_out;
    double t_tol_rho = 1e-2, t_tol_tau = 5e-2;
    tingley->add_option("--norm-x", t_norm_x, "domain norm spec")->required();
    tingley->add_option("--norm-y", t_norm_y, "target norm spec");
    tingley->add_option("--map", t_map, "ground-truth matrix [[a,b],[c,d]]; Y = image of X");
    tingley->add_option("--e1y", t_e1y, "image frame vector 'x,y' on S_Y");
    tingley->add_option("--e2y", t_e2y, "image frame vector 'x,y' on S_Y");
    tingley->add_option("--tol-rho", t_tol_rho, "curvature-match tolerance for rho");
    tingley->add_option("--tol-tau", t_tol_tau, "curvature-match tolerance for tau");
    tingley->add_option("--out", t_out, "report JSON path");

    auto* intrinsic = app.add_subcommand("intrinsic", "eps-chain residuals of natural arcs");
    std::string i_norm, i_out;
    int i_pairs = 64, i_levels = 6;
    unsigned i_seed = 0;
    intrinsic->add_option("--norm", i_norm, "norm spec")->required();
    intrinsic->add_option("--pairs", i_pairs, "number of random (a, b) pairs");
    intrinsic->add_option("--levels", i_levels, "dyadic refinement levels");
    intrinsic->add_option("--seed", i_seed, "RNG seed for the pair sampler");
    intrinsic->add_option("--out", i_out, "residual CSV path");

    try {
        app.parse(argc, argv);
        if (curvature->parsed())
            return cmd_curvature(c_norm, c_grid, c_out, c_svg, c_curve_out, c_table_out);
        if (estimate->parsed())
            return cmd_estimate(e_norm, e_oracle, e_grid, e_eps, e_rho_threshold, e_null_tol,
                                e_out, e_cmp, e_svg);
        if (reconstruct->parsed())
            return cmd_reconstruct(r_profile, r_step, r_smax, r_r0, r_r0p, r_out, r_svg);
        if (tingley->parsed())
            return cmd_tingley(t_norm_x, t_norm_y, t_map, t_e1y, t_e2y, t_tol_rho, t_tol_tau,
                               t_out);
        if (intrinsic->parsed()) return cmd_intrinsic(i_norm, i_pairs, i_levels, i_seed, i_out);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            return app.exit(e); // --help
        }
        std::cerr << json{{"error", "config"}, {"message", e.what()}}.dump() << "\n";
        return 2;
    } catch (const Error& e) {
        const char* cls = e.error_class() == ErrorClass::config    ? "config"
                          : e.error_class() == ErrorClass::numeric ? "numeric"
                                                                   : "mismatch";
        std::cerr << json{{"error", cls}, {"message", e.what()}}.dump() << "\n";
        switch (e.error_class()) {
            case ErrorClass::config: return 2;
            case ErrorClass::numeric: return 3;
            case ErrorClass::mismatch: return 4;
        }
    } catch (const std::exception& e) {
        std::cerr << json{{"error", "internal"}, {"message", e.what()}}.dump() << "\n";
        return 3;
    }
    return 0;
}
