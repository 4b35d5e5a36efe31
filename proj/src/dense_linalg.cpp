#include "pheat/dense_linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace pheat {

namespace {

void require(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
}

std::string cholesky_message(std::size_t pivot, double value) {
    return "cholesky: pivot " + std::to_string(pivot) + " nonpositive (" +
           std::to_string(value) + ")";
}

}  // namespace

SpdMatrix::SpdMatrix(Matrix m) : m_(std::move(m)) {
    require(m_.rows() == m_.cols(), "SpdMatrix: matrix is not square");
    const double scale = max_abs(m_);
    const double tol = 1e-13 * std::max(scale, 1.0);
    for (std::size_t i = 0; i < m_.rows(); ++i)
        for (std::size_t j = i + 1; j < m_.cols(); ++j)
            require(std::abs(m_(i, j) - m_(j, i)) <= tol, "SpdMatrix: matrix is not symmetric");
}

CholeskyError::CholeskyError(std::size_t pivot, double value)
    : std::runtime_error(cholesky_message(pivot, value)), pivot(pivot), value(value) {}

Matrix cholesky(const SpdMatrix& a) {
    const Matrix& m = a.entries();
    const std::size_t n = a.size();
    double max_diag = 0.0;
    for (std::size_t i = 0; i < n; ++i) max_diag = std::max(max_diag, m(i, i));
    const double tol = 1e-14 * std::max(max_diag, 0.0);

    Matrix g(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        double d = m(j, j);
        for (std::size_t k = 0; k < j; ++k) d -= g(j, k) * g(j, k);
        if (!(d > tol)) throw CholeskyError(j + 1, d);
        g(j, j) = std::sqrt(d);
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = m(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= g(i, k) * g(j, k);
            g(i, j) = s / g(j, j);
        }
    }
    return g;
}

Matrix solve_lower(const Matrix& lower, const Matrix& b) {
    require(lower.rows() == lower.cols(), "solve_lower: matrix is not square");
    require(lower.rows() == b.rows(), "solve_lower: dimensions differ");
    Matrix x = b;
    const std::size_t n = lower.rows();
    for (std::size_t j = 0; j < x.cols(); ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            double s = x(i, j);
            for (std::size_t k = 0; k < i; ++k) s -= lower(i, k) * x(k, j);
            x(i, j) = s / lower(i, i);
        }
    }
    return x;
}

Matrix solve_upper(const Matrix& upper, const Matrix& b) {
    require(upper.rows() == upper.cols(), "solve_upper: matrix is not square");
    require(upper.rows() == b.rows(), "solve_upper: dimensions differ");
    Matrix x = b;
    const std::size_t n = upper.rows();
    for (std::size_t j = 0; j < x.cols(); ++j) {
        for (std::size_t i = n; i-- > 0;) {
            double s = x(i, j);
            for (std::size_t k = i + 1; k < n; ++k) s -= upper(i, k) * x(k, j);
            x(i, j) = s / upper(i, i);
        }
    }
    return x;
}

EigDecomp symmetric_eig(const SpdMatrix& input) {
    const std::size_t n = input.size();
    Matrix a = input.entries();
    Matrix q = Matrix::identity(n);

    double frob = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) frob += a(i, j) * a(i, j);
    frob = std::sqrt(frob);
    const double tol = 1e-12 * frob;

    auto off_norm = [&] {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) s += 2.0 * a(i, j) * a(i, j);
        return std::sqrt(s);
    };

    const std::size_t max_sweeps = 100 * std::max<std::size_t>(n, 1);
    for (std::size_t sweep = 0; sweep < max_sweeps && off_norm() > tol; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t r = p + 1; r < n; ++r) {
                const double apr = a(p, r);
                if (apr == 0.0) continue;
                const double tau = (a(r, r) - a(p, p)) / (2.0 * apr);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;

                const double app = a(p, p);
                const double arr = a(r, r);
                a(p, p) = c * c * app - 2.0 * s * c * apr + s * s * arr;
                a(r, r) = s * s * app + 2.0 * s * c * apr + c * c * arr;
                a(p, r) = 0.0;
                a(r, p) = 0.0;
                for (std::size_t k = 0; k < n; ++k) {
                    if (k == p || k == r) continue;
                    const double akp = a(k, p);
                    const double akr = a(k, r);
                    a(k, p) = c * akp - s * akr;
                    a(p, k) = a(k, p);
                    a(k, r) = s * akp + c * akr;
                    a(r, k) = a(k, r);
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double qkp = q(k, p);
                    const double qkr = q(k, r);
                    q(k, p) = c * qkp - s * qkr;
                    q(k, r) = s * qkp + c * qkr;
                }
            }
        }
    }

    // Sort eigenpairs ascending.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });

    EigDecomp out;
    out.eigenvalues.resize(n);
    out.eigenvectors = Matrix(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        out.eigenvalues[j] = a(order[j], order[j]);
        for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, j) = q(i, order[j]);
    }
    return out;
}

EigDecomp generalized_eig(const SpdMatrix& a, const SpdMatrix& b) {
    require(a.size() == b.size(), "generalized_eig: pencil matrices differ in size");
    const Matrix g = cholesky(b);

    // Reduce to the ordinary problem on c = g^-1 a g^-T, then map back.
    const Matrix t1 = solve_lower(g, a.entries());
    Matrix c = solve_lower(g, transpose(t1));
    for (std::size_t i = 0; i < c.rows(); ++i)
        for (std::size_t j = i + 1; j < c.cols(); ++j) {
            const double v = 0.5 * (c(i, j) + c(j, i));
            c(i, j) = v;
            c(j, i) = v;
        }

    EigDecomp eig = symmetric_eig(SpdMatrix(std::move(c)));
    eig.eigenvectors = solve_upper(transpose(g), eig.eigenvectors);
    return eig;
}

double two_norm(const Matrix& a) {
    if (a.rows() == 0 || a.cols() == 0) return 0.0;
    // Gram matrix on the smaller side, so the Jacobi solve stays cheap.
    Matrix gram = (a.cols() <= a.rows()) ? transpose(a) * a : a * transpose(a);
    for (std::size_t i = 0; i < gram.rows(); ++i)
        for (std::size_t j = i + 1; j < gram.cols(); ++j) {
            const double v = 0.5 * (gram(i, j) + gram(j, i));
            gram(i, j) = v;
            gram(j, i) = v;
        }
    const EigDecomp eig = symmetric_eig(SpdMatrix(std::move(gram)));
    const double lambda = eig.eigenvalues.empty() ? 0.0 : eig.eigenvalues.back();
    return std::sqrt(std::max(lambda, 0.0));
}

namespace {

// Gaussian elimination with partial pivoting; solves a*x = b for matrix b.
Matrix lu_solve(Matrix a, Matrix b) {
    const std::size_t n = a.rows();
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(a(i, k)) > std::abs(a(piv, k))) piv = i;
        if (a(piv, k) == 0.0) throw std::runtime_error("matexp: singular Pade denominator");
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
            for (std::size_t j = 0; j < b.cols(); ++j) std::swap(b(k, j), b(piv, j));
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            const double l = a(i, k) / a(k, k);
            if (l == 0.0) continue;
            for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= l * a(k, j);
            for (std::size_t j = 0; j < b.cols(); ++j) b(i, j) -= l * b(k, j);
        }
    }
    for (std::size_t j = 0; j < b.cols(); ++j) {
        for (std::size_t i = n; i-- > 0;) {
            double s = b(i, j);
            for (std::size_t k = i + 1; k < n; ++k) s -= a(i, k) * b(k, j);
            b(i, j) = s / a(i, i);
        }
    }
    return b;
}

// Diagonal Pade approximant of the given order from precomputed even powers.
Matrix pade_eval(const Matrix& a, const std::vector<double>& coeff,
                 const std::vector<const Matrix*>& even_powers) {
    const std::size_t n = a.rows();
    Matrix odd(n, n);
    Matrix even(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        odd(i, i) = coeff[1];
        even(i, i) = coeff[0];
    }
    for (std::size_t p = 0; p < even_powers.size(); ++p) {
        const Matrix& pw = *even_powers[p];
        const double co = coeff[2 * p + 3];
        const double ce = coeff[2 * p + 2];
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                odd(i, j) += co * pw(i, j);
                even(i, j) += ce * pw(i, j);
            }
    }
    const Matrix u = a * odd;
    return lu_solve(even - u, even + u);
}

}  // namespace

Matrix matexp(const Matrix& a) {
    require(a.rows() == a.cols(), "matexp: matrix is not square");
    const std::size_t n = a.rows();
    if (n == 0) return a;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (!std::isfinite(a(i, j))) throw std::invalid_argument("matexp: nonfinite entry");

    static const std::vector<double> b3 = {120.0, 60.0, 12.0, 1.0};
    static const std::vector<double> b5 = {30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0};
    static const std::vector<double> b7 = {17297280.0, 8648640.0, 1995840.0, 277200.0,
                                           25200.0,    1512.0,    56.0,      1.0};
    static const std::vector<double> b9 = {17643225600.0, 8821612800.0, 2075673600.0,
                                           302702400.0,   30270240.0,   2162160.0,
                                           110880.0,      3960.0,       90.0,
                                           1.0};
    static const std::vector<double> b13 = {64764752532480000.0,
                                            32382376266240000.0,
                                            7771770303897600.0,
                                            1187353796428800.0,
                                            129060195264000.0,
                                            10559470521600.0,
                                            670442572800.0,
                                            33522128640.0,
                                            1323241920.0,
                                            40840800.0,
                                            960960.0,
                                            16380.0,
                                            182.0,
                                            1.0};
    constexpr double theta3 = 1.495585217958292e-2;
    constexpr double theta5 = 2.539398330063230e-1;
    constexpr double theta7 = 9.504178996162932e-1;
    constexpr double theta9 = 2.097847961257068e0;
    constexpr double theta13 = 5.371920351148152e0;

    const double nrm = norm_one(a);
    const Matrix a2 = a * a;
    if (nrm <= theta9) {
        const Matrix a4 = a2 * a2;
        if (nrm <= theta3) return pade_eval(a, b3, {&a2});
        if (nrm <= theta5) return pade_eval(a, b5, {&a2, &a4});
        const Matrix a6 = a2 * a4;
        if (nrm <= theta7) return pade_eval(a, b7, {&a2, &a4, &a6});
        const Matrix a8 = a4 * a4;
        return pade_eval(a, b9, {&a2, &a4, &a6, &a8});
    }

    int s = static_cast<int>(std::ceil(std::log2(nrm / theta13)));
    s = std::max(s, 0);
    if (s > 1022) throw std::runtime_error("matexp: norm too large, scaling would overflow");
    const double scale = std::ldexp(1.0, -s);

    const Matrix as = scale * a;
    const Matrix s2 = as * as;
    const Matrix s4 = s2 * s2;
    const Matrix s6 = s2 * s4;

    Matrix w(n, n);
    Matrix z(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            w(i, j) = b13[13] * s6(i, j) + b13[11] * s4(i, j) + b13[9] * s2(i, j);
            z(i, j) = b13[12] * s6(i, j) + b13[10] * s4(i, j) + b13[8] * s2(i, j);
        }
    Matrix u = s6 * w;
    Matrix v = s6 * z;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            u(i, j) += b13[7] * s6(i, j) + b13[5] * s4(i, j) + b13[3] * s2(i, j);
            v(i, j) += b13[6] * s6(i, j) + b13[4] * s4(i, j) + b13[2] * s2(i, j);
        }
    for (std::size_t i = 0; i < n; ++i) {
        u(i, i) += b13[1];
        v(i, i) += b13[0];
    }
    u = as * u;

    Matrix f = lu_solve(v - u, v + u);
    for (int r = 0; r < s; ++r) f = f * f;

    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (!std::isfinite(f(i, j)))
                throw std::runtime_error("matexp: result overflowed double range");
    return f;
}

}  // namespace pheat
