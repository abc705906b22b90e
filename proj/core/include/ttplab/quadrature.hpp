#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "ttplab/geometry.hpp"

namespace ttplab {

// Gauss-Legendre nodes and weights on [a, b].
void gauss_legendre(int n, double a, double b,
                    std::vector<double>& nodes, std::vector<double>& weights);

// Gauss-Hermite nodes/weights for weight exp(-x^2) on (-inf, inf),
// normalized so that sum(w) = sqrt(pi).
void gauss_hermite(int n, std::vector<double>& nodes, std::vector<double>& weights);

// Tensor-product Gauss-Legendre grid over an axis-aligned box.
// Weights sum to the box volume.
class QuadratureGrid {
  public:
    QuadratureGrid() = default;
    QuadratureGrid(const Box3& domain, std::array<int, 3> order_per_axis);
    QuadratureGrid(const Box3& domain, int order)
        : QuadratureGrid(domain, {order, order, order}) {}

    const std::vector<Vec3>& nodes() const { return nodes_; }
    const std::vector<double>& weights() const { return weights_; }
    std::size_t size() const { return nodes_.size(); }
    const Box3& domain() const { return domain_; }
    std::array<int, 3> order() const { return order_; }

    // sum_i w_i f(r_i)
    template <class F>
    double integrate(F&& f) const {
        double acc = 0.0;
        for (std::size_t i = 0; i < nodes_.size(); ++i) acc += weights_[i] * f(nodes_[i]);
        return acc;
    }

  private:
    Box3 domain_{};
    std::array<int, 3> order_{0, 0, 0};
    std::vector<Vec3> nodes_;
    std::vector<double> weights_;
};

}  // namespace ttplab
