#include "escher/potential.hpp"

#include <limits>

#include "escher/error.hpp"

namespace escher {

Potential Potential::quartic() {
  Potential p;
  p.name = "quartic";
  p.convex = [](double r) { return 0.25 * (1.0 + r * r * r * r); };
  p.convex_derivative = [](double r) { return r * r * r; };
  p.convex_second_derivative = [](double r) { return 3.0 * r * r; };
  p.theta = 1.0;
  p.growth_exponent = 3.0;
  p.lower_bound = 0.0;
  return p;
}

Potential Potential::from_name(std::string_view name) {
  if (name == "quartic") return quartic();
  fail(ErrorCode::ValidationError, "potential: unknown potential '" + std::string(name) + "'");
}

double uniqueness_timestep_bound(double epsilon, double theta) {
  if (theta == 0.0) return std::numeric_limits<double>::infinity();
  return 4.0 * epsilon * epsilon * epsilon / (theta * theta);
}

}  // namespace escher
