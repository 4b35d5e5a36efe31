#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "pheat/fem_space.hpp"
#include "pheat/periodic_solver.hpp"

// Independent reference integrator for the coefficient ODE M u' + nu A u = b(t):
// Crank-Nicolson steps drive a shooting solve of the periodicity condition
// (I - S) u0 = r, where S and r are the linear and affine parts of the period
// map, so the oracle shares no time-integration machinery with the solver
// under test.
namespace cn {

namespace detail {

// LU factorization of a symmetric tridiagonal matrix, no pivoting (SPD input).
struct TriFactor {
    std::vector<double> diag;
    std::vector<double> sub;
    std::vector<double> off;
};

inline TriFactor factor(const std::vector<double>& diag, const std::vector<double>& off) {
    TriFactor f{diag, std::vector<double>(diag.size(), 0.0), off};
    for (std::size_t i = 1; i < diag.size(); ++i) {
        const double l = off[i - 1] / f.diag[i - 1];
        f.sub[i] = l;
        f.diag[i] = diag[i] - l * off[i - 1];
    }
    return f;
}

inline void solve_in_place(const TriFactor& f, std::vector<double>& x) {
    const std::size_t n = x.size();
    for (std::size_t i = 1; i < n; ++i) x[i] -= f.sub[i] * x[i - 1];
    x[n - 1] /= f.diag[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) x[i] = (x[i] - f.off[i] * x[i + 1]) / f.diag[i];
}

// y = T x for the symmetric tridiagonal with the given diagonal/offdiagonal.
inline std::vector<double> tri_apply(const std::vector<double>& diag,
                                     const std::vector<double>& off,
                                     const std::vector<double>& x) {
    const std::size_t n = x.size();
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        double v = diag[i] * x[i];
        if (i > 0) v += off[i - 1] * x[i - 1];
        if (i + 1 < n) v += off[i] * x[i + 1];
        y[i] = v;
    }
    return y;
}

// Dense solve with partial pivoting, for the small shooting system.
inline std::vector<double> solve_dense(pheat::Matrix a, std::vector<double> b) {
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(a(r, col)) > std::abs(a(pivot, col))) pivot = r;
        if (a(pivot, col) == 0.0) throw std::runtime_error("cn: singular shooting matrix");
        if (pivot != col) {
            for (std::size_t c = col; c < n; ++c) std::swap(a(pivot, c), a(col, c));
            std::swap(b[pivot], b[col]);
        }
        for (std::size_t r = col + 1; r < n; ++r) {
            const double l = a(r, col) / a(col, col);
            if (l == 0.0) continue;
            for (std::size_t c = col + 1; c < n; ++c) a(r, c) -= l * a(col, c);
            b[r] -= l * b[col];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double v = b[i];
        for (std::size_t c = i + 1; c < n; ++c) v -= a(i, c) * x[c];
        x[i] = v / a(i, i);
    }
    return x;
}

}  // namespace detail

/// Periodic Crank-Nicolson trajectory sampled at m + 1 uniform knots of [0, T].
struct PeriodicOrbit {
    pheat::Matrix knots;  // dofs x (m+1)
};

inline PeriodicOrbit periodic_orbit(const pheat::FemPair& fem, double nu, double T,
                                    const pheat::SpaceTimeFn& f, std::size_t steps,
                                    std::size_t m, int quad_order) {
    if (m == 0 || steps % m != 0)
        throw std::invalid_argument("cn: steps must be a positive multiple of m");
    const std::size_t dofs = fem.mesh.n_elements - 1;
    const double dt = T / static_cast<double>(steps);

    std::vector<double> mass_diag(dofs), mass_off(dofs - 1);
    std::vector<double> stiff_diag(dofs), stiff_off(dofs - 1);
    for (std::size_t i = 0; i < dofs; ++i) {
        mass_diag[i] = fem.mass.entries()(i, i);
        stiff_diag[i] = fem.stiffness.entries()(i, i);
    }
    for (std::size_t i = 0; i + 1 < dofs; ++i) {
        mass_off[i] = fem.mass.entries()(i, i + 1);
        stiff_off[i] = fem.stiffness.entries()(i, i + 1);
    }

    const double c = 0.5 * nu * dt;
    std::vector<double> lhs_diag(dofs), lhs_off(dofs - 1);
    std::vector<double> rhs_diag(dofs), rhs_off(dofs - 1);
    for (std::size_t i = 0; i < dofs; ++i) {
        lhs_diag[i] = mass_diag[i] + c * stiff_diag[i];
        rhs_diag[i] = mass_diag[i] - c * stiff_diag[i];
    }
    for (std::size_t i = 0; i + 1 < dofs; ++i) {
        lhs_off[i] = mass_off[i] + c * stiff_off[i];
        rhs_off[i] = mass_off[i] - c * stiff_off[i];
    }
    const detail::TriFactor lhs = detail::factor(lhs_diag, lhs_off);

    const auto step_free = [&](std::vector<double>& u) {
        u = detail::tri_apply(rhs_diag, rhs_off, u);
        detail::solve_in_place(lhs, u);
    };

    // Linear part of the period map, one propagated basis vector per column.
    pheat::Matrix period_map(dofs, dofs);
    for (std::size_t colv = 0; colv < dofs; ++colv) {
        std::vector<double> u(dofs, 0.0);
        u[colv] = 1.0;
        for (std::size_t j = 0; j < steps; ++j) step_free(u);
        for (std::size_t r = 0; r < dofs; ++r) period_map(r, colv) = u[r];
    }

    const auto forced_sweep = [&](std::vector<double> u, pheat::Matrix* record) {
        std::vector<double> load = pheat::load_vector(f, 0.0, fem.mesh, quad_order);
        const std::size_t stride = steps / m;
        if (record)
            for (std::size_t r = 0; r < dofs; ++r) (*record)(r, 0) = u[r];
        for (std::size_t j = 0; j < steps; ++j) {
            const double t_next = static_cast<double>(j + 1) * dt;
            const std::vector<double> load_next = pheat::load_vector(f, t_next, fem.mesh, quad_order);
            u = detail::tri_apply(rhs_diag, rhs_off, u);
            for (std::size_t r = 0; r < dofs; ++r)
                u[r] += 0.5 * dt * (load[r] + load_next[r]);
            detail::solve_in_place(lhs, u);
            load = load_next;
            if (record && (j + 1) % stride == 0)
                for (std::size_t r = 0; r < dofs; ++r) (*record)(r, (j + 1) / stride) = u[r];
        }
        return u;
    };

    // Affine part, then the shooting solve (I - S) u0 = r.
    const std::vector<double> affine = forced_sweep(std::vector<double>(dofs, 0.0), nullptr);
    pheat::Matrix shoot(dofs, dofs);
    for (std::size_t r = 0; r < dofs; ++r)
        for (std::size_t q = 0; q < dofs; ++q)
            shoot(r, q) = (r == q ? 1.0 : 0.0) - period_map(r, q);
    const std::vector<double> u0 = detail::solve_dense(shoot, affine);

    PeriodicOrbit orbit{pheat::Matrix(dofs, m + 1)};
    forced_sweep(u0, &orbit.knots);
    return orbit;
}

}  // namespace cn
