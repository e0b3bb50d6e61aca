#pragma once

#include <vector>

namespace shs {

// Gauss-Legendre rule on [0,1]: integrates polynomials of degree <= 2m-1
// exactly; weights sum to 1.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  int size() const { return static_cast<int>(nodes.size()); }
};

// Nodes and weights for the m-point rule, 1 <= m <= 64, by Newton iteration
// on the Legendre polynomial mapped from [-1,1].
QuadratureRule gauss_legendre(int m);

}  // namespace shs
