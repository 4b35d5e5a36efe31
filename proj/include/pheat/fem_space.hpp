#pragma once

#include <cstddef>
#include <functional>

#include "pheat/dense_linalg.hpp"
#include "pheat/quadrature.hpp"

namespace pheat {

/// Scalar field on the space-time cylinder (0,1) x (0,T).
using SpaceTimeFn = std::function<double(double x, double t)>;

/// Uniform partition of (0,1) with homogeneous Dirichlet ends; only the
/// n_elements-1 interior nodes carry degrees of freedom.
struct Mesh1D {
    std::size_t n_elements = 0;
    double h = 0.0;
    std::vector<double> nodes;  // interior nodes, x_i = (i+1)*h
};

/// Rejects n_elements < 2 (no interior node otherwise).
Mesh1D make_mesh(std::size_t n_elements);

/// Mass and stiffness matrices of the piecewise-linear space on `mesh`,
/// stored dense; both are symmetric positive definite tridiagonals.
struct FemPair {
    SpdMatrix mass;
    SpdMatrix stiffness;
    Mesh1D mesh;
};

FemPair assemble(std::size_t n_elements);

/// Constants attached to the discretization:
///   c_omega  interpolation/projection factor h/pi,
///   c_inv    inverse inequality factor sqrt(12)/h,
///   c_p      Poincare constant 1/pi of the unit interval,
///   lambda1  smallest Dirichlet Laplacian eigenvalue pi^2.
struct SpaceConstants {
    double c_omega;
    double c_inv;
    double c_p;
    double lambda1;
};

SpaceConstants space_constants(const Mesh1D& mesh);

/// Interior load vector (f(.,t), phi_i) by composite Gauss-Legendre with
/// quad_order points per element; quad_order >= 2 required.
Vector load_vector(const SpaceTimeFn& f, double t, const Mesh1D& mesh, int quad_order);

}  // namespace pheat
