#include "pheat/fem_space.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace pheat {

Mesh1D make_mesh(std::size_t n_elements) {
    if (n_elements < 2)
        throw std::invalid_argument("make_mesh: need at least 2 elements for an interior node");
    Mesh1D mesh;
    mesh.n_elements = n_elements;
    mesh.h = 1.0 / static_cast<double>(n_elements);
    mesh.nodes.resize(n_elements - 1);
    for (std::size_t i = 0; i + 1 < n_elements; ++i)
        mesh.nodes[i] = static_cast<double>(i + 1) * mesh.h;
    return mesh;
}

FemPair assemble(std::size_t n_elements) {
    Mesh1D mesh = make_mesh(n_elements);
    const std::size_t n = mesh.nodes.size();
    const double h = mesh.h;

    Matrix mass(n, n);
    Matrix stiffness(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        mass(i, i) = 2.0 * h / 3.0;
        stiffness(i, i) = 2.0 / h;
        if (i + 1 < n) {
            mass(i, i + 1) = h / 6.0;
            mass(i + 1, i) = h / 6.0;
            stiffness(i, i + 1) = -1.0 / h;
            stiffness(i + 1, i) = -1.0 / h;
        }
    }
    return FemPair{SpdMatrix(std::move(mass)), SpdMatrix(std::move(stiffness)), std::move(mesh)};
}

SpaceConstants space_constants(const Mesh1D& mesh) {
    if (mesh.n_elements < 2 || mesh.h <= 0.0)
        throw std::invalid_argument("space_constants: mesh is not initialized");
    constexpr double pi = std::numbers::pi;
    return SpaceConstants{mesh.h / pi, std::sqrt(12.0) / mesh.h, 1.0 / pi, pi * pi};
}

Vector load_vector(const SpaceTimeFn& f, double t, const Mesh1D& mesh, int quad_order) {
    if (quad_order < 2)
        throw std::invalid_argument("load_vector: quad_order must be at least 2");
    if (mesh.n_elements < 2)
        throw std::invalid_argument("load_vector: mesh is not initialized");
    if (!f) throw std::invalid_argument("load_vector: forcing is empty");

    const GaussRule rule = gauss_legendre(quad_order);
    const double h = mesh.h;
    const std::size_t n = mesh.nodes.size();
    Vector b(n, 0.0);

    // Element (x_e, x_e + h); the two hats on it are linear ramps.
    for (std::size_t e = 0; e < mesh.n_elements; ++e) {
        const double x_left = static_cast<double>(e) * h;
        for (std::size_t g = 0; g < rule.size(); ++g) {
            const double xi = 0.5 * (rule.nodes[g] + 1.0);  // in (0,1)
            const double x = x_left + xi * h;
            const double w = 0.5 * h * rule.weights[g];
            const double fv = w * f(x, t);
            if (e > 0) b[e - 1] += fv * (1.0 - xi);   // hat centered at x_e
            if (e + 1 < mesh.n_elements) b[e] += fv * xi;  // hat centered at x_e + h
        }
    }
    return b;
}

}  // namespace pheat
