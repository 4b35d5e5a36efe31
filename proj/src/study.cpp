#include "pheat/study.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "pheat/bounds.hpp"
#include "pheat/manufactured.hpp"

namespace pheat {

StudyConfig::StudyConfig() : beta_list{0.0, 0.5 * std::numbers::pi} {}

StudyConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_config: cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("load_config: " + path + " is not valid JSON: " + e.what());
    }
    if (!j.is_object()) throw std::runtime_error("load_config: top level must be an object");

    StudyConfig cfg;
    for (const auto& [key, value] : j.items()) {
        if (key == "nu_list")
            cfg.nu_list = value.get<std::vector<double>>();
        else if (key == "beta_list")
            cfg.beta_list = value.get<std::vector<double>>();
        else if (key == "n_list")
            cfg.n_list = value.get<std::vector<std::size_t>>();
        else if (key == "m_rule")
            cfg.m_rule = value.get<std::string>();
        else if (key == "m_list")
            cfg.m_list = value.get<std::vector<std::size_t>>();
        else if (key == "T")
            cfg.T = value.get<double>();
        else if (key == "quad_order")
            cfg.quad_order = value.get<int>();
        else if (key == "output")
            cfg.output = value.get<std::string>();
        else
            throw std::runtime_error("load_config: unknown key \"" + key + "\"");
    }
    return cfg;
}

void validate(const StudyConfig& cfg) {
    auto fail = [](const std::string& what) { throw std::invalid_argument("study config: " + what); };
    if (cfg.nu_list.empty()) fail("nu_list is empty");
    for (double nu : cfg.nu_list)
        if (!(nu > 0.0)) fail("nu values must be positive");
    if (cfg.beta_list.empty()) fail("beta_list is empty");
    if (cfg.n_list.empty()) fail("n_list is empty");
    for (std::size_t n : cfg.n_list)
        if (n < 2) fail("n values must be at least 2");
    if (cfg.m_rule != "n_squared" && cfg.m_rule != "explicit")
        fail("m_rule must be n_squared or explicit");
    if (cfg.m_rule == "explicit") {
        if (cfg.m_list.size() != cfg.n_list.size())
            fail("m_list must have one entry per n_list entry");
        for (std::size_t m : cfg.m_list)
            if (m < 1) fail("m values must be at least 1");
    }
    if (cfg.T != 1.0) fail("the manufactured benchmark has period 1, so T must be 1");
    if (cfg.quad_order < 4) fail("quad_order must be at least 4");
}

namespace {

StudyRow run_one(double nu, double beta, std::size_t n, std::size_t m, int quad_order) {
    const auto start = std::chrono::steady_clock::now();

    const ManufacturedProblem prob{nu, beta};
    FemPair fem = assemble(n);
    const SpaceConstants sc = space_constants(fem.mesh);
    const TimeGrid grid = make_time_grid(m, ManufacturedProblem::period);
    const QuadratureSpec quad{1, quad_order, quad_order};

    SemidiscreteSystem sys = make_system(std::move(fem), nu, prob.period, forcing(prob));
    const FullDiscreteSolution sol = solve_periodic(sys, grid, quad);
    const ErrorReport err = aposteriori_errors(sol, prob, quad_order);

    const BoundInputs inputs = make_bound_inputs(sc, grid, nu, f_norm_analytic(prob));
    const BoundReport report = bound_report(sys.fem, sys.decomp, inputs);

    const auto stop = std::chrono::steady_clock::now();

    StudyRow row{};
    row.nu = nu;
    row.beta = beta;
    row.n = n;
    row.m = m;
    row.h = sys.fem.mesh.h;
    row.k = grid.k;
    row.kappa1 = report.kappa1;
    row.K1 = report.K1;
    row.K2 = report.K2;
    row.err_h1 = err.err_h1;
    row.err_l2 = err.err_l2;
    row.bound_h1 = report.h1_bound;
    row.bound_l2 = report.l2_bound;
    row.ratio_h1 = report.h1_bound / err.err_h1;
    row.ratio_l2 = report.l2_bound / err.err_l2;
    row.runtime_ms = std::chrono::duration<double, std::milli>(stop - start).count();
    return row;
}

}  // namespace

StudyResult run_study(const StudyConfig& cfg) {
    validate(cfg);

    std::vector<double> nus = cfg.nu_list;
    std::vector<double> betas = cfg.beta_list;
    std::sort(nus.begin(), nus.end());
    std::sort(betas.begin(), betas.end());

    // Keep (n, m) pairs zipped before ordering by n.
    std::vector<std::pair<std::size_t, std::size_t>> nm;
    for (std::size_t i = 0; i < cfg.n_list.size(); ++i) {
        const std::size_t n = cfg.n_list[i];
        const std::size_t m = (cfg.m_rule == "explicit") ? cfg.m_list[i] : n * n;
        nm.emplace_back(n, m);
    }
    std::sort(nm.begin(), nm.end());

    StudyResult result;
    for (double nu : nus) {
        for (double beta : betas) {
            for (const auto& [n, m] : nm) {
                try {
                    result.rows.push_back(run_one(nu, beta, n, m, cfg.quad_order));
                } catch (const std::exception& e) {
                    std::ostringstream os;
                    os << "nu=" << nu << " beta=" << beta << " n=" << n << ": " << e.what();
                    result.aborted = true;
                    result.failure = os.str();
                    return result;
                }
            }
        }
    }
    return result;
}

void emit_csv(const std::vector<StudyRow>& rows, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("emit_csv: cannot open " + path + " for writing");

    auto num = [](double v) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };

    out << "nu,beta,n,m,h,k,kappa1,K1,K2,err_h1,err_l2,bound_h1,bound_l2,ratio_h1,ratio_l2,"
           "runtime_ms\n";
    for (const StudyRow& r : rows) {
        out << num(r.nu) << ',' << num(r.beta) << ',' << r.n << ',' << r.m << ',' << num(r.h)
            << ',' << num(r.k) << ',' << num(r.kappa1) << ',' << num(r.K1) << ',' << num(r.K2)
            << ',' << num(r.err_h1) << ',' << num(r.err_l2) << ',' << num(r.bound_h1) << ','
            << num(r.bound_l2) << ',' << num(r.ratio_h1) << ',' << num(r.ratio_l2) << ','
            << num(r.runtime_ms) << '\n';
    }
    if (!out) throw std::runtime_error("emit_csv: write to " + path + " failed");
}

}  // namespace pheat
