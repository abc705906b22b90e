#include "ttplab/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "ttplab/errors.hpp"

namespace ttplab {

// Newton iteration on the Legendre polynomial, exploiting root symmetry.
void gauss_legendre(int n, double a, double b,
                    std::vector<double>& nodes, std::vector<double>& weights) {
    if (n < 1) throw ConfigError("gauss_legendre: order must be >= 1");
    nodes.assign(n, 0.0);
    weights.assign(n, 0.0);

    const double eps = 1e-15;
    const double xm = 0.5 * (b + a);
    const double xl = 0.5 * (b - a);
    const int m = (n + 1) / 2;

    for (int i = 1; i <= m; ++i) {
        double z = std::cos(std::numbers::pi * (i - 0.25) / (n + 0.5));
        double z1, pp;
        int guard = 0;
        do {
            double p1 = 1.0, p2 = 0.0;
            for (int j = 1; j <= n; ++j) {
                double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
            }
            pp = n * (z * p1 - p2) / (z * z - 1.0);
            z1 = z;
            z = z1 - p1 / pp;
        } while (std::abs(z - z1) > eps && ++guard < 100);

        nodes[i - 1] = xm - xl * z;
        nodes[n - i] = xm + xl * z;
        weights[i - 1] = 2.0 * xl / ((1.0 - z * z) * pp * pp);
        weights[n - i] = weights[i - 1];
    }
}

// Hermite polynomials H_n (physicists'), Newton iteration from the
// asymptotic initial guesses; weights w_i = 2^{n-1} n! sqrt(pi) / (n H_{n-1}(x_i))^2.
void gauss_hermite(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    if (n < 1) throw ConfigError("gauss_hermite: order must be >= 1");
    nodes.assign(n, 0.0);
    weights.assign(n, 0.0);

    const double eps = 1e-14;
    const double pim4 = 0.7511255444649425;  // pi^{-1/4}
    const int m = (n + 1) / 2;

    // Positive roots in descending order; the initial guesses reference the
    // previously found roots in this layout.
    std::vector<double> root(m, 0.0), wgt(m, 0.0);
    double z = 0.0;
    for (int i = 0; i < m; ++i) {
        if (i == 0) {
            z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
        } else if (i == 1) {
            z -= 1.14 * std::pow(n, 0.426) / z;
        } else if (i == 2) {
            z = 1.86 * z - 0.86 * root[0];
        } else if (i == 3) {
            z = 1.91 * z - 0.91 * root[1];
        } else {
            z = 2.0 * z - root[i - 2];
        }
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            // Orthonormal recurrence keeps the values well scaled.
            double p1 = pim4, p2 = 0.0;
            for (int j = 1; j <= n; ++j) {
                double p3 = p2;
                p2 = p1;
                p1 = z * std::sqrt(2.0 / j) * p2 - std::sqrt((j - 1.0) / j) * p3;
            }
            pp = std::sqrt(2.0 * n) * p2;
            double z1 = z;
            z = z1 - p1 / pp;
            if (std::abs(z - z1) <= eps) break;
        }
        root[i] = z;
        wgt[i] = 2.0 / (pp * pp);
    }
    for (int i = 0; i < m; ++i) {
        nodes[i] = -root[i];          // most negative first
        nodes[n - 1 - i] = root[i];
        weights[i] = wgt[i];
        weights[n - 1 - i] = wgt[i];
    }
}

QuadratureGrid::QuadratureGrid(const Box3& domain, std::array<int, 3> order_per_axis)
    : domain_(domain), order_(order_per_axis) {
    if (domain.volume() <= 0.0)
        throw ConfigError("QuadratureGrid: domain must have positive volume");

    std::array<std::vector<double>, 3> x, w;
    gauss_legendre(order_[0], domain.lo.x, domain.hi.x, x[0], w[0]);
    gauss_legendre(order_[1], domain.lo.y, domain.hi.y, x[1], w[1]);
    gauss_legendre(order_[2], domain.lo.z, domain.hi.z, x[2], w[2]);

    nodes_.reserve(static_cast<std::size_t>(order_[0]) * order_[1] * order_[2]);
    weights_.reserve(nodes_.capacity());
    for (int i = 0; i < order_[0]; ++i)
        for (int j = 0; j < order_[1]; ++j)
            for (int k = 0; k < order_[2]; ++k) {
                nodes_.push_back({x[0][i], x[1][j], x[2][k]});
                weights_.push_back(w[0][i] * w[1][j] * w[2][k]);
            }
}

}  // namespace ttplab
