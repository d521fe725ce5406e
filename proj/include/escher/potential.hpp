#pragma once

#include <string>
#include <string_view>

namespace escher {

/// Double-well potential split as F(r) = F1(r) - (theta / 2) r^2 with F1 convex.
/// Only the quartic F(r) = (1 - r^2)^2 / 4 is built in: F1 = (1 + r^4) / 4, theta = 1.
struct Potential {
  using Fn = double (*)(double);

  std::string name;
  Fn convex = nullptr;
  Fn convex_derivative = nullptr;
  Fn convex_second_derivative = nullptr;
  double theta = 0.0;
  double growth_exponent = 1.0;  // |F1'(r)| <= a |r|^q + a
  double lower_bound = 0.0;      // F >= lower_bound

  double value(double r) const { return convex(r) - 0.5 * theta * r * r; }
  double derivative(double r) const { return convex_derivative(r) - theta * r; }

  static Potential quartic();
  /// Throws ValidationError for unknown names.
  static Potential from_name(std::string_view name);
};

/// Time step below which the fully implicit scheme has a unique solution: 4 eps^3 / theta^2.
double uniqueness_timestep_bound(double epsilon, double theta);

}  // namespace escher
