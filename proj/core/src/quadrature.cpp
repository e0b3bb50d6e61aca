#include "shs/quadrature.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace shs {

namespace {

// Legendre P_m and its derivative at x via the three-term recurrence.
std::pair<double, double> legendre(int m, double x) {
  double p0 = 1.0, p1 = x;
  for (int k = 2; k <= m; ++k) {
    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  const double dp = m * (x * p1 - p0) / (x * x - 1.0);
  return {p1, dp};
}

}  // namespace

QuadratureRule gauss_legendre(int m) {
  if (m < 1 || m > 64) throw std::invalid_argument("gauss_legendre: m must be in [1, 64]");

  QuadratureRule rule;
  rule.nodes.resize(m);
  rule.weights.resize(m);
  if (m == 1) {
    rule.nodes[0] = 0.5;
    rule.weights[0] = 1.0;
    return rule;
  }

  const double pi = 3.14159265358979323846;
  for (int i = 0; i < (m + 1) / 2; ++i) {
    // Tricomi-style initial guess, then Newton.
    double x = std::cos(pi * (i + 0.75) / (m + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      const auto [p, d] = legendre(m, x);
      dp = d;
      const double dx = p / d;
      x -= dx;
      if (std::abs(dx) < 1e-15) {
        dp = legendre(m, x).second;
        break;
      }
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    // Map from [-1,1] to [0,1]; enforce node symmetry around 0.5 exactly.
    rule.nodes[i] = 0.5 * (1.0 - x);
    rule.nodes[m - 1 - i] = 0.5 * (1.0 + x);
    rule.weights[i] = 0.5 * w;
    rule.weights[m - 1 - i] = 0.5 * w;
  }
  if (m % 2 == 1) {
    rule.nodes[m / 2] = 0.5;
    const auto [p, d] = legendre(m, 0.0);
    rule.weights[m / 2] = 1.0 / (d * d);
  }
  return rule;
}

}  // namespace shs
