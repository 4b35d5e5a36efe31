#pragma once

#include <cstddef>
#include <stdexcept>

#include "pheat/matrix.hpp"

namespace pheat {

/// Square matrix checked for symmetry on construction (1e-13 relative to the
/// largest entry). Routines below that require symmetry take this type so the
/// check happens once, at the boundary.
class SpdMatrix {
public:
    explicit SpdMatrix(Matrix m);
    const Matrix& entries() const { return m_; }
    std::size_t size() const { return m_.rows(); }

private:
    Matrix m_;
};

/// Thrown when a Cholesky pivot is not strictly positive; `pivot` is the
/// 1-based index of the offending diagonal entry.
class CholeskyError : public std::runtime_error {
public:
    CholeskyError(std::size_t pivot, double value);
    std::size_t pivot;
    double value;
};

/// Lower-triangular G with G*G^T = a. Pivots below 1e-14 times the largest
/// diagonal entry count as nonpositive.
Matrix cholesky(const SpdMatrix& a);

/// Solve lower*x = b / upper*x = b by substitution, column by column.
Matrix solve_lower(const Matrix& lower, const Matrix& b);
Matrix solve_upper(const Matrix& upper, const Matrix& b);

/// Eigenvalues ascending; eigenvector columns normalized to v^T b v = 1 for
/// the generalized problem (b = identity for the plain symmetric solve).
struct EigDecomp {
    Vector eigenvalues;
    Matrix eigenvectors;
};

/// Cyclic Jacobi on a symmetric matrix: sweeps until the off-diagonal
/// Frobenius mass is below 1e-12 relative, capped at 100*n sweeps.
EigDecomp symmetric_eig(const SpdMatrix& a);

/// Generalized pencil a*v = lambda*b*v with b positive definite, reduced via
/// the Cholesky factor of b to a plain symmetric solve. Eigenvectors come back
/// b-orthonormal.
EigDecomp generalized_eig(const SpdMatrix& a, const SpdMatrix& b);

/// Spectral norm, computed on the Gram matrix so rectangular inputs work.
double two_norm(const Matrix& a);

/// Matrix exponential by scaling and squaring with diagonal Pade
/// approximants of order 3/5/7/9/13 (order picked from the 1-norm).
/// Throws std::runtime_error when the required scaling would overflow.
Matrix matexp(const Matrix& a);

}  // namespace pheat
