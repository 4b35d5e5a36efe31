#include "pheat/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace pheat {

namespace {

// Legendre P_n and P_n' at x via the three-term recurrence.
struct LegendreEval {
    double p;
    double dp;
};

LegendreEval legendre(int n, double x) {
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    const double dp = n * (x * p1 - p0) / (x * x - 1.0);
    return {p1, dp};
}

}  // namespace

GaussRule gauss_legendre(int points) {
    if (points < 1) throw std::invalid_argument("gauss_legendre: need at least one point");
    const int n = points;
    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    if (n == 1) {
        rule.nodes[0] = 0.0;
        rule.weights[0] = 2.0;
        return rule;
    }
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        // Chebyshev-like initial guess, then Newton on P_n.
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        LegendreEval e{};
        for (int it = 0; it < 100; ++it) {
            e = legendre(n, x);
            const double dx = e.p / e.dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        e = legendre(n, x);
        const double w = 2.0 / ((1.0 - x * x) * e.dp * e.dp);
        rule.nodes[i] = -x;
        rule.weights[i] = w;
        rule.nodes[n - 1 - i] = x;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) rule.nodes[half - 1] = 0.0;
    return rule;
}

double pairwise_sum(const std::vector<double>& terms) {
    // Recursion on index ranges, sequential below a small cutoff.
    struct Reduce {
        const std::vector<double>& t;
        double run(std::size_t lo, std::size_t hi) const {
            if (hi - lo <= 8) {
                double s = 0.0;
                for (std::size_t i = lo; i < hi; ++i) s += t[i];
                return s;
            }
            const std::size_t mid = lo + (hi - lo) / 2;
            return run(lo, mid) + run(mid, hi);
        }
    };
    if (terms.empty()) return 0.0;
    return Reduce{terms}.run(0, terms.size());
}

}  // namespace pheat
