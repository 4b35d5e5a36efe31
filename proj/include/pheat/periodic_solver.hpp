#pragma once

#include <cstddef>

#include "pheat/fem_space.hpp"

namespace pheat {

/// Uniform time grid on [0, T] with m steps of width k = T/m.
struct TimeGrid {
    std::size_t m = 0;
    double T = 0.0;
    double k = 0.0;
    double c_j = 0.0;  // interpolation factor k/pi
};

/// Rejects m < 1 or T <= 0.
TimeGrid make_time_grid(std::size_t m, double T);

/// Composite Gauss-Legendre controls for the time integrals:
///   panels       panels on the integration interval (per grid step inside
///                the periodic solve),
///   order        points per panel,
///   space_order  points per element when sampling the load vector.
struct QuadratureSpec {
    int panels = 1;
    int order = 5;
    int space_order = 5;
};

/// Spatially discretized problem: mass M, stiffness A, and the coefficient
/// ODE M u' + nu A u = b(t) with b the load vector of `forcing`. The pencil
/// eigendecomposition A v = mu M v is computed once on construction; the
/// propagator exp(-nu t M^-1 A) is diagonal in that basis.
struct SemidiscreteSystem {
    FemPair fem;
    EigDecomp decomp;  // eigenvalues mu ascending, columns M-orthonormal
    double nu = 0.0;
    double T = 0.0;
    SpaceTimeFn forcing;
};

/// Rejects nu <= 0, T <= 0, and an empty forcing.
SemidiscreteSystem make_system(FemPair fem, double nu, double T, SpaceTimeFn forcing);

/// Thrown when 1 - exp(-nu*T*mu) falls below 1e-14 for some mode, i.e. the
/// period map is too close to the identity to invert stably.
class NonContractiveError : public std::runtime_error {
public:
    explicit NonContractiveError(double margin);
    double margin;
};

/// Propagator action exp(-nu*t*M^-1 A) v through the eigenbasis; t >= 0.
Vector theta_apply(const SemidiscreteSystem& sys, double t, const Vector& v);

/// Integral of exp(-nu*(upper-s)*M^-1 A) M^-1 b(s) ds over (0, upper],
/// by quad.panels composite Gauss-Legendre panels; 0 < upper <= T.
Vector load_integral(const SemidiscreteSystem& sys, double upper, const QuadratureSpec& quad);

/// The unique T-periodic trajectory of the coefficient ODE, represented per
/// eigenmode by panel-boundary prefixes of the variation-of-constants
/// integral, so evaluation anywhere in [0, T] costs one partial panel.
class SemidiscreteTrajectory {
public:
    SemidiscreteTrajectory(const SemidiscreteSystem& sys, const TimeGrid& grid,
                           const QuadratureSpec& quad);

    /// Nodal coefficients at any t in [0, T].
    Vector coeff(double t) const;
    /// Coefficients in the eigenbasis at any t in [0, T].
    Vector modal(double t) const;
    /// Same, read straight off the stored prefixes at boundary l*T/n_panels.
    Vector modal_at_boundary(std::size_t l) const;
    Vector coeff_at_boundary(std::size_t l) const;

    std::size_t n_panels() const { return n_panels_; }
    const TimeGrid& grid() const { return grid_; }

private:
    const SemidiscreteSystem* sys_;
    TimeGrid grid_;
    QuadratureSpec quad_;
    std::size_t n_panels_;
    double width_;
    GaussRule rule_;
    Matrix vtrans_;          // eigenvector transpose, for modal forcing
    Matrix prefix_;          // n x (n_panels+1), folded integral at boundaries
    Vector decay_T_;         // exp(-nu*mu*T) per mode
    Vector periodic_modal_;  // modal coefficients at t = 0
};

/// Coefficients of the full discretization: column j holds the nodal values
/// at t_j, and value/dx evaluate the piecewise bilinear interpolant.
struct FullDiscreteSolution {
    Matrix coeffs;  // (n_elements-1) x (m+1); column m equals column 0
    TimeGrid grid;
    Mesh1D mesh;

    double value(double x, double t) const;
    double dx(double x, double t) const;
};

/// Samples the periodic trajectory at the grid knots. The last column is
/// copied from the first; the trajectory itself closes the period to
/// rounding, which solve_periodic verifies before copying.
FullDiscreteSolution solve_periodic(const SemidiscreteSystem& sys, const TimeGrid& grid,
                                    const QuadratureSpec& quad = {});

/// Max-norm residual of M u' + nu A u - b(t) over the sample times, with u'
/// taken from central differences of the trajectory (step well inside one
/// grid interval). Sample times must keep a distance of at least k/10 from
/// every grid knot.
double ode_residual(const FullDiscreteSolution& sol, const SemidiscreteSystem& sys,
                    const std::vector<double>& sample_times, const QuadratureSpec& quad = {});

/// Same residual for the piecewise-linear-in-time interpolant of sol itself;
/// this one decays only like the step size.
double interpolant_ode_residual(const FullDiscreteSolution& sol, const SemidiscreteSystem& sys,
                                const std::vector<double>& sample_times);

}  // namespace pheat
