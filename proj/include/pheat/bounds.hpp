#pragma once

#include "pheat/fem_space.hpp"
#include "pheat/periodic_solver.hpp"

namespace pheat {

/// Everything the a priori estimates need, gathered once:
/// problem data (nu, T), analytic constants, discretization factors, and the
/// space-time L2 norm of the forcing.
struct BoundInputs {
    double nu;
    double T;
    double lambda1;  // pi^2
    double c_p;      // 1/pi
    double c_omega;  // h/pi
    double c_inv;    // sqrt(12)/h
    double c_j;      // k/pi
    double f_norm;   // ||f|| over the cylinder
};

BoundInputs make_bound_inputs(const SpaceConstants& sc, const TimeGrid& grid, double nu,
                              double f_norm);

/// Contraction factor of the discrete period map, exp(-nu*T*mu_min).
/// Requires mu_min > 0; values below 1e-300 are clamped to zero.
double kappa1(const EigDecomp& decomp, double nu, double T);

/// The same factor evaluated literally as the spectral norm of the
/// stiffness-conjugated propagator exp(-nu*T*M^-1 A); used as a cross-check.
double kappa1_matrix_norm(const FemPair& fem, double nu, double T);

/// A priori norms of the continuous periodic solution, all scaled by f_norm:
///   u0_l2_a / u0_l2_b   two bounds on ||u(0)||,
///   u0_grad             bound on ||grad u(0)||,
///   ut_norm             bound on ||u_t|| over the cylinder,
///   energy              bound on nu * ||grad u||^2 over the cylinder.
struct ContinuousBounds {
    double u0_l2_a;
    double u0_l2_b;
    double u0_grad;
    double ut_norm;
    double energy;
};

ContinuousBounds continuous_bounds(const BoundInputs& in);

/// Bounds for the nonhomogeneous initial-value comparison problems used by
/// the projection-error argument: time-derivative and gradient norms of the
/// two auxiliary solutions, then the H1 and final-time L2 gaps between them.
/// L2 norms of the initial data enter through the Poincare inequality.
struct NonhomBounds {
    double xi_t;
    double xi_h1;
    double xih_t;
    double xih_h1;
    double err_h1;
    double err_l2_T;
};

NonhomBounds nonhom_bounds(double f_norm, double grad_xi0, double grad_zeta_h,
                           double init_gap_l2, double nu, double c_p, double c_omega);

/// Stability constants of the periodic reconstruction; require kappa in [0,1).
struct KConstants {
    double K1;
    double K2;
};

KConstants k_constants(double nu, double T, double lambda1, double kappa);

/// Guaranteed H1 and L2 error constants of the full discretization,
/// both proportional to f_norm.
struct FullDiscreteBounds {
    double h1_bound;
    double l2_bound;
};

FullDiscreteBounds full_discrete_bounds(const BoundInputs& in, double K2, double kappa);

/// One-stop evaluation for a given discretization. non_rigorous_rounding is
/// always true (plain double arithmetic, no directed rounding);
/// underflow_clamped reports whether any exponential was clamped to zero.
/// For systems of size at most 64 the spectral kappa1 is cross-checked
/// against the literal matrix norm at 1e-10 relative.
struct BoundReport {
    double kappa1;
    double K1;
    double K2;
    double h1_bound;
    double l2_bound;
    ContinuousBounds continuous;
    bool underflow_clamped;
    bool non_rigorous_rounding;
};

BoundReport bound_report(const FemPair& fem, const EigDecomp& decomp, const BoundInputs& in);

}  // namespace pheat
