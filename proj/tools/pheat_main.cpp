#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "pheat/bounds.hpp"
#include "pheat/manufactured.hpp"
#include "pheat/study.hpp"

namespace {

void print_value(const char* name, double v) { std::printf("%-12s %.17g\n", name, v); }

int cmd_study(const std::string& config_path, const std::string& out_override) {
    pheat::StudyConfig cfg;
    if (!config_path.empty()) cfg = pheat::load_config(config_path);
    if (!out_override.empty()) cfg.output = out_override;

    const pheat::StudyResult result = pheat::run_study(cfg);
    pheat::emit_csv(result.rows, cfg.output);

    for (const pheat::StudyRow& r : result.rows)
        std::printf("nu=%-5g beta=%-8g n=%-4zu m=%-6zu err_h1=%.3e err_l2=%.3e "
                    "bound_h1=%.3e bound_l2=%.3e\n",
                    r.nu, r.beta, r.n, r.m, r.err_h1, r.err_l2, r.bound_h1, r.bound_l2);
    std::printf("wrote %zu rows to %s\n", result.rows.size(), cfg.output.c_str());

    if (result.aborted) {
        std::cerr << "study aborted at " << result.failure << "\n";
        return 1;
    }
    return 0;
}

int cmd_solve(double nu, double beta, std::size_t n, std::size_t m, int quad_order,
              const std::string& out_path) {
    const pheat::ManufacturedProblem prob{nu, beta};
    pheat::FemPair fem = pheat::assemble(n);
    const pheat::SpaceConstants sc = pheat::space_constants(fem.mesh);
    const pheat::TimeGrid grid = pheat::make_time_grid(m, prob.period);
    const pheat::QuadratureSpec quad{1, quad_order, quad_order};

    const pheat::SemidiscreteSystem sys =
        pheat::make_system(std::move(fem), nu, prob.period, pheat::forcing(prob));
    const pheat::FullDiscreteSolution sol = pheat::solve_periodic(sys, grid, quad);
    const pheat::ErrorReport err = pheat::aposteriori_errors(sol, prob, quad_order);

    const pheat::BoundInputs inputs =
        pheat::make_bound_inputs(sc, grid, nu, pheat::f_norm_analytic(prob));
    const pheat::BoundReport report = pheat::bound_report(sys.fem, sys.decomp, inputs);

    print_value("kappa1", report.kappa1);
    print_value("err_h1", err.err_h1);
    print_value("err_l2", err.err_l2);
    print_value("bound_h1", report.h1_bound);
    print_value("bound_l2", report.l2_bound);

    if (!out_path.empty()) {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw std::runtime_error("solve: cannot open " + out_path + " for writing");
        out << "t,x,u\n";
        char buf[128];
        for (std::size_t j = 0; j <= grid.m; ++j) {
            const double t = (j == grid.m) ? grid.T : static_cast<double>(j) * grid.k;
            for (std::size_t i = 0; i < sol.mesh.nodes.size(); ++i) {
                std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", t, sol.mesh.nodes[i],
                              sol.coeffs(i, j));
                out << buf;
            }
        }
        std::printf("wrote nodal samples to %s\n", out_path.c_str());
    }
    return 0;
}

int cmd_bounds(double nu, double T, std::size_t n, std::size_t m, double fnorm_override) {
    const pheat::FemPair fem = pheat::assemble(n);
    const pheat::SpaceConstants sc = pheat::space_constants(fem.mesh);
    const pheat::TimeGrid grid = pheat::make_time_grid(m, T);
    const pheat::EigDecomp decomp = pheat::generalized_eig(fem.stiffness, fem.mass);

    const double f_norm = (fnorm_override >= 0.0)
                              ? fnorm_override
                              : pheat::f_norm_analytic(pheat::ManufacturedProblem{nu, 0.0});
    const pheat::BoundInputs inputs = pheat::make_bound_inputs(sc, grid, nu, f_norm);
    const pheat::BoundReport report = pheat::bound_report(fem, decomp, inputs);

    print_value("nu", nu);
    print_value("T", T);
    print_value("h", fem.mesh.h);
    print_value("k", grid.k);
    print_value("f_norm", f_norm);
    print_value("kappa1", report.kappa1);
    print_value("K1", report.K1);
    print_value("K2", report.K2);
    print_value("h1_bound", report.h1_bound);
    print_value("l2_bound", report.l2_bound);
    print_value("u0_l2_a", report.continuous.u0_l2_a);
    print_value("u0_l2_b", report.continuous.u0_l2_b);
    print_value("u0_grad", report.continuous.u0_grad);
    print_value("ut_norm", report.continuous.ut_norm);
    print_value("energy", report.continuous.energy);
    std::printf("%-12s %s\n", "clamped", report.underflow_clamped ? "yes" : "no");
    std::printf("%-12s %s\n", "rigorous", report.non_rigorous_rounding ? "no" : "yes");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Periodic heat equation: full discretization, measured errors, a priori bounds"};
    app.require_subcommand(1);

    std::string config_path;
    std::string study_out;
    CLI::App* study = app.add_subcommand("study", "run the convergence study sweep");
    study->add_option("--config", config_path, "JSON config path (defaults apply if omitted)");
    study->add_option("--out", study_out, "override the CSV output path");

    double nu = 1.0;
    double beta = 0.0;
    std::size_t n = 32;
    std::size_t m = 1024;
    int quad_order = 5;
    std::string solve_out;
    CLI::App* solve = app.add_subcommand("solve", "solve one manufactured instance");
    solve->add_option("--nu", nu, "diffusion coefficient")->check(CLI::PositiveNumber);
    solve->add_option("--beta", beta, "time phase of the benchmark");
    solve->add_option("--n", n, "number of space elements");
    solve->add_option("--m", m, "number of time steps");
    solve->add_option("--quad-order", quad_order, "Gauss-Legendre points per panel/element");
    solve->add_option("--out", solve_out, "write nodal samples as CSV");

    double b_nu = 1.0;
    double b_T = 1.0;
    std::size_t b_n = 32;
    std::size_t b_m = 1024;
    double b_fnorm = -1.0;
    CLI::App* bounds = app.add_subcommand("bounds", "evaluate the a priori bounds only");
    bounds->add_option("--nu", b_nu, "diffusion coefficient")->check(CLI::PositiveNumber);
    bounds->add_option("--T", b_T, "period")->check(CLI::PositiveNumber);
    bounds->add_option("--n", b_n, "number of space elements");
    bounds->add_option("--m", b_m, "number of time steps");
    bounds->add_option("--fnorm", b_fnorm,
                       "forcing norm override (default: manufactured benchmark value)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (study->parsed()) return cmd_study(config_path, study_out);
        if (solve->parsed()) return cmd_solve(nu, beta, n, m, quad_order, solve_out);
        if (bounds->parsed()) return cmd_bounds(b_nu, b_T, b_n, b_m, b_fnorm);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
