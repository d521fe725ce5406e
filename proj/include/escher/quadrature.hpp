#pragma once

#include <array>
#include <vector>

namespace escher {

/// Rule on a triangle in barycentric coordinates. Weights sum to one and are scaled by the
/// element area at use.
struct QuadratureRule {
  int degree = 0;
  std::vector<std::array<double, 3>> points;
  std::vector<double> weights;
};

/// Supported degrees: 1 (centroid), 2 (3 points), 4 (6-point symmetric), 10 (collapsed
/// Gauss-Legendre product rule, 36 points). Throws UnsupportedDegree otherwise.
QuadratureRule quadrature_rule(int degree);

/// Gauss-Legendre nodes and weights on [0, 1].
void gauss_legendre_unit(int n, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace escher
