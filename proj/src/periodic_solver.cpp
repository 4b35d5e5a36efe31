#include "pheat/periodic_solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace pheat {

namespace {

void require(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
}

// Modal forcing c(s) = V^T b(s) with b the load vector at time s.
Vector modal_load(const Matrix& vtrans, const SemidiscreteSystem& sys, double s,
                  int space_order) {
    return vtrans * load_vector(sys.forcing, s, sys.fem.mesh, space_order);
}

}  // namespace

TimeGrid make_time_grid(std::size_t m, double T) {
    if (m < 1) throw std::invalid_argument("make_time_grid: need at least one step");
    if (!(T > 0.0)) throw std::invalid_argument("make_time_grid: period must be positive");
    TimeGrid grid;
    grid.m = m;
    grid.T = T;
    grid.k = T / static_cast<double>(m);
    grid.c_j = grid.k / std::numbers::pi;
    return grid;
}

SemidiscreteSystem make_system(FemPair fem, double nu, double T, SpaceTimeFn forcing) {
    if (!(nu > 0.0)) throw std::invalid_argument("make_system: nu must be positive");
    if (!(T > 0.0)) throw std::invalid_argument("make_system: T must be positive");
    if (!forcing) throw std::invalid_argument("make_system: forcing is empty");

    EigDecomp decomp = generalized_eig(fem.stiffness, fem.mass);
    if (decomp.eigenvalues.empty() || decomp.eigenvalues.front() <= 0.0)
        throw std::runtime_error("make_system: pencil eigenvalues are not positive");
    return SemidiscreteSystem{std::move(fem), std::move(decomp), nu, T, std::move(forcing)};
}

NonContractiveError::NonContractiveError(double margin)
    : std::runtime_error("periodic solve: period map within " + std::to_string(margin) +
                         " of the identity, cannot invert I - Theta(T)"),
      margin(margin) {}

Vector theta_apply(const SemidiscreteSystem& sys, double t, const Vector& v) {
    require(t >= 0.0, "theta_apply: negative time");
    const std::size_t n = sys.decomp.eigenvalues.size();
    require(v.size() == n, "theta_apply: vector length does not match system size");

    const Matrix& V = sys.decomp.eigenvectors;
    const Vector mv = sys.fem.mass.entries() * v;
    Vector y(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t k = 0; k < n; ++k) s += V(k, i) * mv[k];
        y[i] = s * std::exp(-sys.nu * sys.decomp.eigenvalues[i] * t);
    }
    return V * y;
}

Vector load_integral(const SemidiscreteSystem& sys, double upper, const QuadratureSpec& quad) {
    require(upper > 0.0 && upper <= sys.T * (1.0 + 1e-12), "load_integral: upper not in (0, T]");
    require(quad.panels >= 1, "load_integral: need at least one panel");
    require(quad.order >= 1, "load_integral: need at least one point per panel");

    const std::size_t n = sys.decomp.eigenvalues.size();
    const Matrix vtrans = transpose(sys.decomp.eigenvectors);
    const GaussRule rule = gauss_legendre(quad.order);
    const double w = upper / quad.panels;

    Vector acc(n, 0.0);
    for (int p = 0; p < quad.panels; ++p) {
        const double left = p * w;
        for (std::size_t g = 0; g < rule.size(); ++g) {
            const double s = left + 0.5 * (rule.nodes[g] + 1.0) * w;
            const double wgt = 0.5 * w * rule.weights[g];
            const Vector c = modal_load(vtrans, sys, s, quad.space_order);
            for (std::size_t i = 0; i < n; ++i)
                acc[i] += wgt * std::exp(-sys.nu * sys.decomp.eigenvalues[i] * (upper - s)) * c[i];
        }
    }
    return sys.decomp.eigenvectors * acc;
}

SemidiscreteTrajectory::SemidiscreteTrajectory(const SemidiscreteSystem& sys,
                                               const TimeGrid& grid, const QuadratureSpec& quad)
    : sys_(&sys), grid_(grid), quad_(quad) {
    require(grid.m >= 1 && grid.T > 0.0, "trajectory: time grid is not initialized");
    require(std::abs(grid.T - sys.T) <= 1e-12 * sys.T, "trajectory: grid period differs from system period");
    require(quad.panels >= 1, "trajectory: need at least one panel per step");
    require(quad.order >= 1, "trajectory: need at least one point per panel");

    n_panels_ = grid.m * static_cast<std::size_t>(quad.panels);
    width_ = grid.T / static_cast<double>(n_panels_);
    rule_ = gauss_legendre(quad.order);
    vtrans_ = transpose(sys.decomp.eigenvectors);

    const std::size_t n = sys.decomp.eigenvalues.size();
    const Vector& mu = sys.decomp.eigenvalues;
    const double nu = sys.nu;

    // Fold the variation-of-constants integral panel by panel:
    //   P(l+1) = exp(-nu*mu*w) P(l) + integral over panel l.
    Vector fold(n);
    for (std::size_t i = 0; i < n; ++i) fold[i] = std::exp(-nu * mu[i] * width_);

    prefix_ = Matrix(n, n_panels_ + 1);
    for (std::size_t l = 0; l < n_panels_; ++l) {
        const double left = static_cast<double>(l) * width_;
        Vector panel(n, 0.0);
        for (std::size_t g = 0; g < rule_.size(); ++g) {
            const double s = left + 0.5 * (rule_.nodes[g] + 1.0) * width_;
            const double wgt = 0.5 * width_ * rule_.weights[g];
            const Vector c = modal_load(vtrans_, sys, s, quad_.space_order);
            const double tail = left + width_ - s;
            for (std::size_t i = 0; i < n; ++i)
                panel[i] += wgt * std::exp(-nu * mu[i] * tail) * c[i];
        }
        for (std::size_t i = 0; i < n; ++i)
            prefix_(i, l + 1) = fold[i] * prefix_(i, l) + panel[i];
    }

    decay_T_.resize(n);
    periodic_modal_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        decay_T_[i] = std::exp(-nu * mu[i] * grid.T);
        const double denom = -std::expm1(-nu * mu[i] * grid.T);
        if (denom <= 1e-14) throw NonContractiveError(denom);
        periodic_modal_[i] = prefix_(i, n_panels_) / denom;
    }
}

Vector SemidiscreteTrajectory::modal_at_boundary(std::size_t l) const {
    require(l <= n_panels_, "trajectory: panel boundary out of range");
    const std::size_t n = periodic_modal_.size();
    const Vector& mu = sys_->decomp.eigenvalues;
    Vector y(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double decay =
            (l == n_panels_) ? decay_T_[i]
                             : std::exp(-sys_->nu * mu[i] * (static_cast<double>(l) * width_));
        y[i] = decay * periodic_modal_[i] + prefix_(i, l);
    }
    return y;
}

Vector SemidiscreteTrajectory::coeff_at_boundary(std::size_t l) const {
    return sys_->decomp.eigenvectors * modal_at_boundary(l);
}

Vector SemidiscreteTrajectory::modal(double t) const {
    require(t >= 0.0 && t <= grid_.T * (1.0 + 1e-12), "trajectory: time outside [0, T]");
    const std::size_t n = periodic_modal_.size();
    const Vector& mu = sys_->decomp.eigenvalues;
    const double nu = sys_->nu;

    std::size_t l = static_cast<std::size_t>(std::floor(t / width_));
    if (l > n_panels_ - 1) l = n_panels_ - 1;
    const double left = static_cast<double>(l) * width_;
    const double len = t - left;

    Vector y(n);
    for (std::size_t i = 0; i < n; ++i)
        y[i] = std::exp(-nu * mu[i] * t) * periodic_modal_[i] +
               std::exp(-nu * mu[i] * len) * prefix_(i, l);

    if (len > 0.0) {
        for (std::size_t g = 0; g < rule_.size(); ++g) {
            const double s = left + 0.5 * (rule_.nodes[g] + 1.0) * len;
            const double wgt = 0.5 * len * rule_.weights[g];
            const Vector c = modal_load(vtrans_, *sys_, s, quad_.space_order);
            for (std::size_t i = 0; i < n; ++i)
                y[i] += wgt * std::exp(-nu * mu[i] * (t - s)) * c[i];
        }
    }
    return y;
}

Vector SemidiscreteTrajectory::coeff(double t) const {
    return sys_->decomp.eigenvectors * modal(t);
}

namespace {

// Linear interpolation of a coefficient column at x, zero at both ends.
double column_value(const Matrix& coeffs, std::size_t col, const Mesh1D& mesh, double x,
                    bool derivative) {
    const double h = mesh.h;
    std::size_t e = static_cast<std::size_t>(std::floor(x / h));
    if (e > mesh.n_elements - 1) e = mesh.n_elements - 1;
    const double xi = x / h - static_cast<double>(e);
    const double left = (e >= 1) ? coeffs(e - 1, col) : 0.0;
    const double right = (e + 1 < mesh.n_elements) ? coeffs(e, col) : 0.0;
    if (derivative) return (right - left) / h;
    return (1.0 - xi) * left + xi * right;
}

double bilinear_eval(const FullDiscreteSolution& sol, double x, double t, bool derivative) {
    require(x >= 0.0 && x <= 1.0, "solution: x outside [0, 1]");
    require(t >= 0.0 && t <= sol.grid.T * (1.0 + 1e-12), "solution: t outside [0, T]");
    std::size_t j = static_cast<std::size_t>(std::floor(t / sol.grid.k));
    if (j > sol.grid.m - 1) j = sol.grid.m - 1;
    const double theta = t / sol.grid.k - static_cast<double>(j);
    const double a = column_value(sol.coeffs, j, sol.mesh, x, derivative);
    const double b = column_value(sol.coeffs, j + 1, sol.mesh, x, derivative);
    return (1.0 - theta) * a + theta * b;
}

}  // namespace

double FullDiscreteSolution::value(double x, double t) const {
    return bilinear_eval(*this, x, t, false);
}

double FullDiscreteSolution::dx(double x, double t) const {
    return bilinear_eval(*this, x, t, true);
}

FullDiscreteSolution solve_periodic(const SemidiscreteSystem& sys, const TimeGrid& grid,
                                    const QuadratureSpec& quad) {
    const SemidiscreteTrajectory traj(sys, grid, quad);
    const std::size_t n = sys.decomp.eigenvalues.size();
    const std::size_t per_step = static_cast<std::size_t>(quad.panels);

    FullDiscreteSolution sol;
    sol.grid = grid;
    sol.mesh = sys.fem.mesh;
    sol.coeffs = Matrix(n, grid.m + 1);
    for (std::size_t j = 0; j <= grid.m; ++j) {
        const Vector u = traj.coeff_at_boundary(j * per_step);
        for (std::size_t i = 0; i < n; ++i) sol.coeffs(i, j) = u[i];
    }

    // The variation-of-constants formula closes the period by construction;
    // anything beyond rounding here means the solve itself is inconsistent.
    double closure = 0.0;
    double scale = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
        closure = std::max(closure, std::abs(sol.coeffs(i, grid.m) - sol.coeffs(i, 0)));
        scale = std::max(scale, std::abs(sol.coeffs(i, 0)));
    }
    if (closure > 1e-10 * scale)
        throw std::runtime_error("solve_periodic: trajectory does not close the period");
    for (std::size_t i = 0; i < n; ++i) sol.coeffs(i, grid.m) = sol.coeffs(i, 0);
    return sol;
}

namespace {

void check_sample_times(const std::vector<double>& times, const TimeGrid& grid) {
    require(!times.empty(), "ode residual: no sample times");
    for (double t : times) {
        require(t > 0.0 && t < grid.T, "ode residual: sample time outside (0, T)");
        const double nearest = std::round(t / grid.k) * grid.k;
        require(std::abs(t - nearest) >= 0.1 * grid.k * (1.0 - 1e-9),
                "ode residual: sample time too close to a grid knot");
    }
}

}  // namespace

double ode_residual(const FullDiscreteSolution& sol, const SemidiscreteSystem& sys,
                    const std::vector<double>& sample_times, const QuadratureSpec& quad) {
    check_sample_times(sample_times, sol.grid);
    const SemidiscreteTrajectory traj(sys, sol.grid, quad);
    const Matrix& mass = sys.fem.mass.entries();
    const Matrix& stiffness = sys.fem.stiffness.entries();

    double worst = 0.0;
    for (double t : sample_times) {
        const double nearest = std::round(t / sol.grid.k) * sol.grid.k;
        const double gap = std::abs(t - nearest);
        const double delta = std::min(1e-5 * sol.grid.T, 0.4 * gap);

        const Vector up = traj.coeff(t + delta);
        const Vector um = traj.coeff(t - delta);
        const Vector u = traj.coeff(t);
        Vector du(u.size());
        for (std::size_t i = 0; i < u.size(); ++i) du[i] = (up[i] - um[i]) / (2.0 * delta);

        const Vector b = load_vector(sys.forcing, t, sys.fem.mesh, quad.space_order);
        const Vector r = mass * du + sys.nu * (stiffness * u) - b;
        worst = std::max(worst, norm_inf(r));
    }
    return worst;
}

double interpolant_ode_residual(const FullDiscreteSolution& sol, const SemidiscreteSystem& sys,
                                const std::vector<double>& sample_times) {
    check_sample_times(sample_times, sol.grid);
    const Matrix& mass = sys.fem.mass.entries();
    const Matrix& stiffness = sys.fem.stiffness.entries();
    const std::size_t n = sol.coeffs.rows();

    double worst = 0.0;
    for (double t : sample_times) {
        std::size_t j = static_cast<std::size_t>(std::floor(t / sol.grid.k));
        if (j > sol.grid.m - 1) j = sol.grid.m - 1;
        const double theta = t / sol.grid.k - static_cast<double>(j);
        Vector u(n);
        Vector du(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double a = sol.coeffs(i, j);
            const double b = sol.coeffs(i, j + 1);
            u[i] = (1.0 - theta) * a + theta * b;
            du[i] = (b - a) / sol.grid.k;
        }
        const Vector b = load_vector(sys.forcing, t, sys.fem.mesh, 5);
        const Vector r = mass * du + sys.nu * (stiffness * u) - b;
        worst = std::max(worst, norm_inf(r));
    }
    return worst;
}

}  // namespace pheat
