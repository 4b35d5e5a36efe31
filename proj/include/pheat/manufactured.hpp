#pragma once

#include <utility>

#include "pheat/periodic_solver.hpp"

namespace pheat {

/// Closed-form periodic benchmark on (0,1) x (0,1):
///   u(x,t) = sin(2 pi x) sin(2 pi t + beta),
/// with the forcing that makes u solve u_t - nu u_xx = f. The time frequency
/// is locked to period 1, so only T = 1 makes sense for this problem.
struct ManufacturedProblem {
    double nu = 1.0;
    double beta = 0.0;
    static constexpr double period = 1.0;
};

struct ExactPoint {
    double u;
    double ux;
    double f;
};

ExactPoint eval_exact(const ManufacturedProblem& p, double x, double t);

/// The forcing as a callable for the solver layers.
SpaceTimeFn forcing(const ManufacturedProblem& p);

/// Space-time L2 norm of the forcing, sqrt(pi^2 + 4 pi^4 nu^2).
double f_norm_analytic(const ManufacturedProblem& p);

/// Measured space-time errors of a discrete solution against the benchmark,
/// by tensor Gauss-Legendre of the given order (at least 4) on each
/// element-by-step cell; time_subcells refines the measurement grid in time
/// without touching the solution.
struct ErrorReport {
    double err_h1;
    double err_l2;
    int quad_order;
};

ErrorReport aposteriori_errors(const FullDiscreteSolution& sol, const ManufacturedProblem& p,
                               int quad_order, int time_subcells = 1);

/// Least-squares slope of log(err) against log(h); pairs must come with
/// strictly decreasing positive h and positive err.
double slope(const std::vector<std::pair<double, double>>& h_err);

}  // namespace pheat
