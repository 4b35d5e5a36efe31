#pragma once

#include <cstddef>
#include <vector>

namespace pheat {

/// Gauss-Legendre rule on [-1, 1]; exact for polynomials of degree 2n-1.
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
    std::size_t size() const { return nodes.size(); }
};

/// Nodes by Newton iteration on the Legendre recurrence; points >= 1.
GaussRule gauss_legendre(int points);

/// Sum with pairwise splitting so the result is independent of chunked
/// evaluation order and carries O(log n) rounding growth.
double pairwise_sum(const std::vector<double>& terms);

}  // namespace pheat
