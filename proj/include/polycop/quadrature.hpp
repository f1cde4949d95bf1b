#pragma once

#include <cstddef>
#include <vector>

namespace polycop {

// Nodes and weights of a quadrature rule on a reference or mapped interval.
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;

    std::size_t size() const { return nodes.size(); }

    // Affine image of this rule on [a, b] (rule must live on [-1, 1]).
    QuadratureRule mapped_to(double a, double b) const;
};

// Gauss-Legendre rule of the given order on [-1, 1]. Nodes come from Newton
// iterations on the Legendre polynomial and are deterministic to full double
// precision.
QuadratureRule gauss_legendre(std::size_t order);

}  // namespace polycop
