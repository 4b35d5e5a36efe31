#include "pheat/bounds.hpp"

#include <cmath>

namespace pheat {

namespace {

void require(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
}

// exp with the double underflow edge made explicit: arguments beyond the
// representable range are clamped to zero and reported through *clamped.
double clamped_exp(double arg, bool* clamped) {
    if (arg < -690.7) {
        if (clamped) *clamped = true;
        return 0.0;
    }
    return std::exp(arg);
}

}  // namespace

BoundInputs make_bound_inputs(const SpaceConstants& sc, const TimeGrid& grid, double nu,
                              double f_norm) {
    require(nu > 0.0, "make_bound_inputs: nu must be positive");
    require(f_norm >= 0.0, "make_bound_inputs: forcing norm must be nonnegative");
    require(grid.k > 0.0 && grid.T > 0.0, "make_bound_inputs: time grid is not initialized");
    return BoundInputs{nu,       grid.T,   sc.lambda1, sc.c_p,
                       sc.c_omega, sc.c_inv, grid.c_j,   f_norm};
}

double kappa1(const EigDecomp& decomp, double nu, double T) {
    require(nu > 0.0 && T > 0.0, "kappa1: nu and T must be positive");
    require(!decomp.eigenvalues.empty(), "kappa1: empty decomposition");
    const double mu_min = decomp.eigenvalues.front();
    if (!(mu_min > 0.0))
        throw std::runtime_error("kappa1: smallest pencil eigenvalue is not positive");
    return clamped_exp(-nu * T * mu_min, nullptr);
}

double kappa1_matrix_norm(const FemPair& fem, double nu, double T) {
    require(nu > 0.0 && T > 0.0, "kappa1_matrix_norm: nu and T must be positive");
    const Matrix g_mass = cholesky(fem.mass);
    const Matrix lhs = solve_upper(transpose(g_mass), solve_lower(g_mass, fem.stiffness.entries()));
    const Matrix propagator = matexp(-nu * T * lhs);

    // Conjugate by the transposed stiffness factor: D = G G^T, so the H1
    // coordinate map is G^T and its inverse applies from the right.
    const Matrix g_stiff = cholesky(fem.stiffness);
    const Matrix left = transpose(g_stiff) * propagator;
    const Matrix conj = transpose(solve_lower(g_stiff, transpose(left)));
    return two_norm(conj);
}

ContinuousBounds continuous_bounds(const BoundInputs& in) {
    require(in.nu > 0.0 && in.T > 0.0, "continuous_bounds: nu and T must be positive");
    const double a = 1.0 / (1.0 - clamped_exp(-in.nu * in.lambda1 * in.T, nullptr));
    const double f = in.f_norm;
    ContinuousBounds out;
    out.u0_l2_a = a * (in.c_p / std::sqrt(in.nu)) * f;
    out.u0_l2_b = a * std::sqrt(in.T) * f;
    out.u0_grad = a * (1.0 / std::sqrt(in.nu)) * f;
    out.ut_norm = f;
    out.energy = (in.c_p * in.c_p / in.nu + in.T * a * a) * f * f;
    return out;
}

NonhomBounds nonhom_bounds(double f_norm, double grad_xi0, double grad_zeta_h,
                           double init_gap_l2, double nu, double c_p, double c_omega) {
    require(nu > 0.0, "nonhom_bounds: nu must be positive");
    require(f_norm >= 0.0 && grad_xi0 >= 0.0 && grad_zeta_h >= 0.0 && init_gap_l2 >= 0.0,
            "nonhom_bounds: norms must be nonnegative");
    const double srn = std::sqrt(nu);
    NonhomBounds out;
    out.xi_t = f_norm + srn * grad_xi0;
    out.xih_t = f_norm + srn * grad_zeta_h;
    // Initial L2 norms enter via the Poincare inequality ||v|| <= c_p ||v'||.
    out.xi_h1 = (c_p / nu) * f_norm + (c_p / srn) * grad_xi0;
    out.xih_h1 = (c_p / nu) * f_norm + (c_p / srn) * grad_zeta_h;

    const double core =
        4.0 * f_norm * f_norm + nu * (grad_xi0 * grad_xi0 + grad_zeta_h * grad_zeta_h);
    out.err_h1 = std::sqrt(c_omega * c_omega / (nu * nu) * core +
                           init_gap_l2 * init_gap_l2 / (2.0 * nu));
    out.err_l2_T =
        std::sqrt(2.0 / nu * c_omega * c_omega * core + init_gap_l2 * init_gap_l2);
    return out;
}

KConstants k_constants(double nu, double T, double lambda1, double kappa) {
    require(nu > 0.0 && T > 0.0 && lambda1 > 0.0, "k_constants: parameters must be positive");
    require(kappa >= 0.0 && kappa < 1.0, "k_constants: kappa must lie in [0, 1)");
    const double a = 1.0 / (1.0 - clamped_exp(-nu * lambda1 * T, nullptr));
    const double b = 1.0 / (1.0 - kappa);
    KConstants out;
    out.K1 = 2.0 / std::sqrt(nu) * a * std::sqrt(2.0 + b * b);
    out.K2 = 1.0 / nu * std::sqrt(4.0 + 5.0 * a * a + (1.0 + a * a) * b * b);
    return out;
}

FullDiscreteBounds full_discrete_bounds(const BoundInputs& in, double K2, double kappa) {
    require(K2 > 0.0, "full_discrete_bounds: K2 must be positive");
    require(kappa >= 0.0 && kappa < 1.0, "full_discrete_bounds: kappa must lie in [0, 1)");
    const double ratio = (2.0 - kappa) / (1.0 - kappa);
    const double ratio2 = (3.0 - 2.0 * kappa) / (1.0 - kappa);
    FullDiscreteBounds out;
    out.h1_bound = (K2 * in.c_omega + in.c_inv * in.c_j * ratio) * in.f_norm;
    out.l2_bound =
        ((ratio2 * 2.0 / in.nu + 2.0 * K2) * in.c_omega * in.c_omega + ratio * in.c_j) *
        in.f_norm;
    return out;
}

BoundReport bound_report(const FemPair& fem, const EigDecomp& decomp, const BoundInputs& in) {
    require(!decomp.eigenvalues.empty(), "bound_report: empty decomposition");
    BoundReport report{};
    report.non_rigorous_rounding = true;
    report.underflow_clamped = false;

    const double mu_min = decomp.eigenvalues.front();
    if (!(mu_min > 0.0))
        throw std::runtime_error("bound_report: smallest pencil eigenvalue is not positive");
    report.kappa1 = clamped_exp(-in.nu * in.T * mu_min, &report.underflow_clamped);
    clamped_exp(-in.nu * in.lambda1 * in.T, &report.underflow_clamped);

    // On small systems confirm the spectral shortcut against the literal
    // matrix-norm evaluation of the contraction factor.
    if (decomp.eigenvalues.size() <= 64 && report.kappa1 > 1e-300) {
        const double literal = kappa1_matrix_norm(fem, in.nu, in.T);
        if (std::abs(literal - report.kappa1) > 1e-10 * report.kappa1)
            throw std::runtime_error(
                "bound_report: spectral and matrix-norm contraction factors disagree");
    }
    if (report.kappa1 >= 1.0)
        throw std::runtime_error("bound_report: contraction factor is not below one");

    const KConstants kc = k_constants(in.nu, in.T, in.lambda1, report.kappa1);
    report.K1 = kc.K1;
    report.K2 = kc.K2;
    const FullDiscreteBounds fd = full_discrete_bounds(in, kc.K2, report.kappa1);
    report.h1_bound = fd.h1_bound;
    report.l2_bound = fd.l2_bound;
    report.continuous = continuous_bounds(in);
    return report;
}

}  // namespace pheat
