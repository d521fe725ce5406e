#include "escher/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "escher/error.hpp"

namespace escher {

void gauss_legendre_unit(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      // three-term recurrence for P_n and its derivative
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    nodes[i] = 0.5 * (1.0 - x);
    weights[i] = 1.0 / ((1.0 - x * x) * dp * dp);  // = (2 / ((1-x^2) P_n'^2)) / 2
  }
}

QuadratureRule quadrature_rule(int degree) {
  QuadratureRule rule;
  rule.degree = degree;
  switch (degree) {
    case 1:
      rule.points = {{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}};
      rule.weights = {1.0};
      return rule;
    case 2:
      rule.points = {{2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0},
                     {1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0},
                     {1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0}};
      rule.weights = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
      return rule;
    case 4: {
      constexpr double a1 = 0.44594849091596488632;
      constexpr double w1 = 0.22338158967801146570;
      constexpr double a2 = 0.09157621350977074346;
      constexpr double w2 = 0.10995174365532186764;
      constexpr double b1 = 1.0 - 2.0 * a1;
      constexpr double b2 = 1.0 - 2.0 * a2;
      rule.points = {{b1, a1, a1}, {a1, b1, a1}, {a1, a1, b1},
                     {b2, a2, a2}, {a2, b2, a2}, {a2, a2, b2}};
      rule.weights = {w1, w1, w1, w2, w2, w2};
      return rule;
    }
    case 10: {
      // Duffy collapse of the unit square: l1 = u, l2 = (1 - u) v, Jacobian (1 - u).
      constexpr int n = 6;
      std::vector<double> x, w;
      gauss_legendre_unit(n, x, w);
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          const double l1 = x[i];
          const double l2 = (1.0 - x[i]) * x[j];
          rule.points.push_back({l1, l2, 1.0 - l1 - l2});
          rule.weights.push_back(2.0 * w[i] * w[j] * (1.0 - x[i]));
        }
      }
      return rule;
    }
    default:
      fail(ErrorCode::UnsupportedDegree,
           "no quadrature rule of degree " + std::to_string(degree));
  }
}

}  // namespace escher
