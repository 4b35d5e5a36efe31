#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

#include "pheat/manufactured.hpp"

using namespace pheat;

namespace {

constexpr double pi = std::numbers::pi;

FullDiscreteSolution zero_solution(std::size_t n, std::size_t m) {
    FullDiscreteSolution sol;
    sol.mesh = make_mesh(n);
    sol.grid = make_time_grid(m, 1.0);
    sol.coeffs = Matrix(n - 1, m + 1);
    return sol;
}

FullDiscreteSolution solve_benchmark(const ManufacturedProblem& p, std::size_t n,
                                     std::size_t m) {
    SemidiscreteSystem sys = make_system(assemble(n), p.nu, p.period, forcing(p));
    return solve_periodic(sys, make_time_grid(m, p.period));
}

}  // namespace

TEST_CASE("eval_exact reproduces closed-form point values") {
    const ManufacturedProblem base{1.0, 0.0};
    CHECK(eval_exact(base, 0.25, 0.25).u == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(eval_exact(base, 0.5, 0.25).ux == doctest::Approx(-2.0 * pi).epsilon(1e-15));
    CHECK(eval_exact(base, 0.25, 0.0).f ==
          doctest::Approx(6.28318530717958647693).epsilon(1e-15));

    const ManufacturedProblem shifted{1.0, 0.5 * pi};
    CHECK(eval_exact(shifted, 0.25, 0.0).u == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(eval_exact(shifted, 0.25, 0.0).f ==
          doctest::Approx(39.4784176043574344753).epsilon(1e-14));

    // Homogeneous Dirichlet ends.
    CHECK(eval_exact(base, 0.0, 0.37).u == 0.0);
    CHECK(eval_exact(base, 0.0, 0.37).f == 0.0);
    CHECK(std::abs(eval_exact(base, 1.0, 0.37).u) < 1e-14);
    CHECK(std::abs(eval_exact(base, 1.0, 0.37).f) < 1e-13);

    // Time periodicity of every field.
    const ExactPoint at0 = eval_exact(base, 0.3, 0.2);
    const ExactPoint at1 = eval_exact(base, 0.3, 1.2);
    CHECK(at1.u == doctest::Approx(at0.u).epsilon(1e-13));
    CHECK(at1.ux == doctest::Approx(at0.ux).epsilon(1e-13));
    CHECK(at1.f == doctest::Approx(at0.f).epsilon(1e-13));
}

TEST_CASE("forcing closes the heat equation for the exact solution") {
    const long double two_pi_l = 2.0L * std::numbers::pi_v<long double>;
    const long double delta = 1e-5L;
    for (double nu : {0.1, 1.0, 10.0}) {
        for (double beta : {0.0, 0.8}) {
            const ManufacturedProblem p{nu, beta};
            const auto u = [&](long double x, long double t) {
                return std::sin(two_pi_l * x) *
                       std::sin(two_pi_l * t + static_cast<long double>(beta));
            };
            for (double x : {0.13, 0.37, 0.71}) {
                for (double t : {0.11, 0.52, 0.93}) {
                    const long double xl = x;
                    const long double tl = t;
                    const long double ut =
                        (u(xl, tl + delta) - u(xl, tl - delta)) / (2.0L * delta);
                    const long double uxx =
                        (u(xl + delta, tl) - 2.0L * u(xl, tl) + u(xl - delta, tl)) /
                        (delta * delta);
                    const double residual = static_cast<double>(
                        ut - static_cast<long double>(nu) * uxx);
                    const double f = eval_exact(p, x, t).f;
                    CAPTURE(nu);
                    CAPTURE(beta);
                    CAPTURE(x);
                    CAPTURE(t);
                    CHECK(residual == doctest::Approx(f).epsilon(1e-6));
                }
            }
        }
    }
}

TEST_CASE("forcing callable matches the point evaluation") {
    const ManufacturedProblem p{0.3, 1.1};
    const SpaceTimeFn f = forcing(p);
    for (double x : {0.1, 0.45, 0.9})
        for (double t : {0.0, 0.33, 0.77}) CHECK(f(x, t) == eval_exact(p, x, t).f);
}

TEST_CASE("analytic forcing norm matches frozen values and quadrature") {
    CHECK(f_norm_analytic({0.1, 0.0}) ==
          doctest::Approx(3.7102517492010506575).epsilon(1e-13));
    CHECK(f_norm_analytic({1.0, 0.0}) ==
          doctest::Approx(19.987645397522418212).epsilon(1e-13));
    CHECK(f_norm_analytic({10.0, 0.0}) ==
          doctest::Approx(197.41708643884415369).epsilon(1e-13));
    // beta shifts the phase, not the norm.
    CHECK(f_norm_analytic({1.0, 0.9}) == f_norm_analytic({1.0, 0.0}));

    // Cross-check by composite tensor quadrature of f^2 over the cylinder.
    const ManufacturedProblem p{0.7, 0.4};
    const SpaceTimeFn f = forcing(p);
    const GaussRule rule = gauss_legendre(8);
    const int panels = 8;
    const double w = 1.0 / panels;
    double total = 0.0;
    for (int px = 0; px < panels; ++px) {
        for (std::size_t gx = 0; gx < rule.size(); ++gx) {
            const double x = (px + 0.5 * (rule.nodes[gx] + 1.0)) * w;
            const double wx = 0.5 * w * rule.weights[gx];
            for (int pt = 0; pt < panels; ++pt) {
                for (std::size_t gt = 0; gt < rule.size(); ++gt) {
                    const double t = (pt + 0.5 * (rule.nodes[gt] + 1.0)) * w;
                    const double v = f(x, t);
                    total += wx * 0.5 * w * rule.weights[gt] * v * v;
                }
            }
        }
    }
    CHECK(std::sqrt(total) == doctest::Approx(f_norm_analytic(p)).epsilon(1e-12));
}

TEST_CASE("measured errors against the zero solution are the exact norms") {
    const ManufacturedProblem p{1.0, 0.0};
    const ErrorReport r = aposteriori_errors(zero_solution(8, 8), p, 7);
    CHECK(r.err_l2 == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(r.err_h1 == doctest::Approx(pi).epsilon(1e-10));
    CHECK(r.quad_order == 7);

    // The phase moves mass around in time but not the cylinder norms.
    const ErrorReport shifted = aposteriori_errors(zero_solution(8, 8), {1.0, 0.5 * pi}, 7);
    CHECK(shifted.err_l2 == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(shifted.err_h1 == doctest::Approx(pi).epsilon(1e-10));

    // Even the minimum order resolves these periodic integrands.
    const ErrorReport coarse = aposteriori_errors(zero_solution(8, 8), p, 4);
    CHECK(coarse.err_l2 == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(coarse.err_h1 == doctest::Approx(pi).epsilon(1e-6));
}

TEST_CASE("measurement is invariant under time subcell refinement") {
    const ManufacturedProblem p{1.0, 0.0};
    const FullDiscreteSolution sol = solve_benchmark(p, 8, 64);
    const ErrorReport whole = aposteriori_errors(sol, p, 6, 1);
    const ErrorReport split = aposteriori_errors(sol, p, 6, 3);
    CHECK(split.err_h1 == doctest::Approx(whole.err_h1).epsilon(1e-12));
    CHECK(split.err_l2 == doctest::Approx(whole.err_l2).epsilon(1e-12));
}

TEST_CASE("errors saturate once the time grid outpaces the mesh") {
    const ManufacturedProblem p{1.0, 0.0};
    const ErrorReport a = aposteriori_errors(solve_benchmark(p, 8, 512), p, 5);
    const ErrorReport b = aposteriori_errors(solve_benchmark(p, 8, 1024), p, 5);
    CHECK(b.err_h1 == doctest::Approx(a.err_h1).epsilon(1e-3));
    CHECK(b.err_l2 == doctest::Approx(a.err_l2).epsilon(1e-3));
}

TEST_CASE("benchmark errors shrink at the optimal orders") {
    const ManufacturedProblem p{1.0, 0.0};
    std::vector<std::pair<double, double>> h1;
    std::vector<std::pair<double, double>> l2;
    for (std::size_t n : {8, 16, 32}) {
        const ErrorReport r = aposteriori_errors(solve_benchmark(p, n, n * n), p, 5);
        const double h = 1.0 / static_cast<double>(n);
        h1.emplace_back(h, r.err_h1);
        l2.emplace_back(h, r.err_l2);
    }
    CHECK(slope(h1) == doctest::Approx(1.0).epsilon(0.15));
    CHECK(slope(l2) == doctest::Approx(2.0).epsilon(0.15));
}

TEST_CASE("aposteriori_errors validation") {
    const ManufacturedProblem p{1.0, 0.0};
    CHECK_THROWS_AS(aposteriori_errors(zero_solution(8, 8), p, 3), std::invalid_argument);
    CHECK_THROWS_AS(aposteriori_errors(zero_solution(8, 8), p, 7, 0), std::invalid_argument);
    CHECK_THROWS_AS(aposteriori_errors(FullDiscreteSolution{}, p, 7), std::invalid_argument);

    FullDiscreteSolution misshapen = zero_solution(8, 8);
    misshapen.coeffs = Matrix(3, 9);
    CHECK_THROWS_AS(aposteriori_errors(misshapen, p, 7), std::invalid_argument);
}

TEST_CASE("slope recovers exact power laws") {
    std::vector<std::pair<double, double>> first;
    std::vector<std::pair<double, double>> second;
    std::vector<std::pair<double, double>> mixed;
    for (double h : {0.5, 0.25, 0.125, 0.0625}) {
        first.emplace_back(h, 0.35 * h);
        second.emplace_back(h, 2.0 * h * h);
        mixed.emplace_back(h, 3.0 * std::pow(h, 1.5));
    }
    CHECK(slope(first) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(slope(second) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(slope(mixed) == doctest::Approx(1.5).epsilon(1e-12));
}

TEST_CASE("slope validation") {
    CHECK_THROWS_AS(slope({{0.5, 1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(slope({{0.25, 1.0}, {0.5, 2.0}}), std::invalid_argument);
    CHECK_THROWS_AS(slope({{0.5, 1.0}, {0.5, 2.0}}), std::invalid_argument);
    CHECK_THROWS_AS(slope({{0.5, 1.0}, {0.25, 0.0}}), std::invalid_argument);
    CHECK_THROWS_AS(slope({{0.5, 1.0}, {-0.25, 2.0}}), std::invalid_argument);
}
