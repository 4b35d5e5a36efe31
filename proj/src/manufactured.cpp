#include "pheat/manufactured.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "pheat/quadrature.hpp"

namespace pheat {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

void require(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
}

}  // namespace

ExactPoint eval_exact(const ManufacturedProblem& p, double x, double t) {
    const double sx = std::sin(two_pi * x);
    const double cx = std::cos(two_pi * x);
    const double st = std::sin(two_pi * t + p.beta);
    const double ct = std::cos(two_pi * t + p.beta);
    ExactPoint out;
    out.u = sx * st;
    out.ux = two_pi * cx * st;
    out.f = sx * (two_pi * ct + two_pi * two_pi * p.nu * st);
    return out;
}

SpaceTimeFn forcing(const ManufacturedProblem& p) {
    return [p](double x, double t) { return eval_exact(p, x, t).f; };
}

double f_norm_analytic(const ManufacturedProblem& p) {
    const double pi2 = std::numbers::pi * std::numbers::pi;
    return std::sqrt(pi2 + 4.0 * pi2 * pi2 * p.nu * p.nu);
}

ErrorReport aposteriori_errors(const FullDiscreteSolution& sol, const ManufacturedProblem& p,
                               int quad_order, int time_subcells) {
    require(quad_order >= 4, "aposteriori_errors: quad_order must be at least 4");
    require(time_subcells >= 1, "aposteriori_errors: time_subcells must be at least 1");
    require(sol.mesh.n_elements >= 2 && sol.grid.m >= 1,
            "aposteriori_errors: solution is not initialized");
    require(sol.coeffs.rows() == sol.mesh.n_elements - 1 &&
                sol.coeffs.cols() == sol.grid.m + 1,
            "aposteriori_errors: coefficient shape does not match mesh and grid");

    const GaussRule rule = gauss_legendre(quad_order);
    const double h = sol.mesh.h;
    const double dt = sol.grid.k / static_cast<double>(time_subcells);
    const std::size_t n_cells =
        sol.mesh.n_elements * sol.grid.m * static_cast<std::size_t>(time_subcells);

    // One partial sum per space-time cell, combined pairwise at the end so
    // the totals do not depend on how the cell loop is chunked.
    std::vector<double> cell_h1(n_cells, 0.0);
    std::vector<double> cell_l2(n_cells, 0.0);

    std::size_t cell = 0;
    for (std::size_t e = 0; e < sol.mesh.n_elements; ++e) {
        const double x0 = static_cast<double>(e) * h;
        for (std::size_t j = 0; j < sol.grid.m; ++j) {
            for (int sub = 0; sub < time_subcells; ++sub, ++cell) {
                const double t0 = static_cast<double>(j) * sol.grid.k + sub * dt;
                double s_h1 = 0.0;
                double s_l2 = 0.0;
                for (std::size_t gx = 0; gx < rule.size(); ++gx) {
                    const double x = x0 + 0.5 * (rule.nodes[gx] + 1.0) * h;
                    const double wx = 0.5 * h * rule.weights[gx];
                    for (std::size_t gt = 0; gt < rule.size(); ++gt) {
                        const double t = t0 + 0.5 * (rule.nodes[gt] + 1.0) * dt;
                        const double w = wx * 0.5 * dt * rule.weights[gt];
                        const ExactPoint ex = eval_exact(p, x, t);
                        const double du = sol.value(x, t) - ex.u;
                        const double dux = sol.dx(x, t) - ex.ux;
                        s_l2 += w * du * du;
                        s_h1 += w * dux * dux;
                    }
                }
                cell_h1[cell] = s_h1;
                cell_l2[cell] = s_l2;
            }
        }
    }

    ErrorReport out;
    out.err_h1 = std::sqrt(pairwise_sum(cell_h1));
    out.err_l2 = std::sqrt(pairwise_sum(cell_l2));
    out.quad_order = quad_order;
    return out;
}

double slope(const std::vector<std::pair<double, double>>& h_err) {
    require(h_err.size() >= 2, "slope: need at least two points");
    double prev = 0.0;
    for (std::size_t i = 0; i < h_err.size(); ++i) {
        require(h_err[i].first > 0.0 && h_err[i].second > 0.0, "slope: values must be positive");
        require(i == 0 || h_err[i].first < prev, "slope: h must be strictly decreasing");
        prev = h_err[i].first;
    }

    const std::size_t n = h_err.size();
    double mx = 0.0;
    double my = 0.0;
    for (const auto& [h, err] : h_err) {
        mx += std::log(h);
        my += std::log(err);
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0;
    double sxy = 0.0;
    for (const auto& [h, err] : h_err) {
        const double dx = std::log(h) - mx;
        sxx += dx * dx;
        sxy += dx * (std::log(err) - my);
    }
    return sxy / sxx;
}

}  // namespace pheat
