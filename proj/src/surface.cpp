#include "escher/surface.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "escher/error.hpp"

namespace escher {

namespace {

constexpr double kPi = std::numbers::pi;

std::string describe(const Vec3& x, double t) {
  std::ostringstream os;
  os.precision(17);
  os << "(" << x.x << ", " << x.y << ", " << x.z << ") at t = " << t;
  return os.str();
}

}  // namespace

std::string_view to_string(SurfaceKind kind) {
  switch (kind) {
    case SurfaceKind::OscillatingSphere: return "oscillating_sphere";
    case SurfaceKind::ConstantAreaTorus: return "constant_area_torus";
    case SurfaceKind::PeriodicTorus: return "periodic_torus";
    case SurfaceKind::StaticSphere: return "static_sphere";
  }
  return "unknown";
}

std::optional<SurfaceKind> surface_kind_from_string(std::string_view name) {
  for (auto kind : {SurfaceKind::OscillatingSphere, SurfaceKind::ConstantAreaTorus,
                    SurfaceKind::PeriodicTorus, SurfaceKind::StaticSphere}) {
    if (to_string(kind) == name) return kind;
  }
  return std::nullopt;
}

LevelSetSurface::LevelSetSurface(SurfaceKind kind, SurfaceParameters params)
    : kind_(kind), params_(params) {}

LevelSetSurface LevelSetSurface::oscillating_sphere() {
  return {SurfaceKind::OscillatingSphere, {}};
}

LevelSetSurface LevelSetSurface::constant_area_torus() {
  return {SurfaceKind::ConstantAreaTorus, {}};
}

LevelSetSurface LevelSetSurface::periodic_torus() { return {SurfaceKind::PeriodicTorus, {}}; }

LevelSetSurface LevelSetSurface::static_sphere(double radius) {
  SurfaceParameters p;
  p.radius = radius;
  return {SurfaceKind::StaticSphere, p};
}

bool LevelSetSurface::is_sphere() const {
  return kind_ == SurfaceKind::OscillatingSphere || kind_ == SurfaceKind::StaticSphere;
}

bool LevelSetSurface::is_torus() const { return !is_sphere(); }

void LevelSetSurface::require_kind(bool ok, const char* what) const {
  if (!ok) {
    fail(ErrorCode::WrongSurfaceKind, std::string(what) + " undefined for " +
                                          std::string(to_string(kind_)));
  }
}

double LevelSetSurface::sphere_radius(double t) const {
  require_kind(is_sphere(), "sphere radius");
  if (kind_ == SurfaceKind::StaticSphere) return params_.radius;
  return std::sqrt(params_.sphere_base + params_.sphere_amplitude * std::cos(params_.frequency * t));
}

double LevelSetSurface::sphere_radius_rate(double t) const {
  require_kind(is_sphere(), "sphere radius");
  if (kind_ == SurfaceKind::StaticSphere) return 0.0;
  // r^2 = b + a cos(f t)  =>  2 r r' = -a f sin(f t)
  return -0.5 * params_.sphere_amplitude * params_.frequency * std::sin(params_.frequency * t) /
         sphere_radius(t);
}

double LevelSetSurface::torus_major_radius(double t) const {
  require_kind(is_torus(), "torus radii");
  if (kind_ == SurfaceKind::ConstantAreaTorus) {
    return params_.major_radius * (1.0 + params_.growth_rate * t);
  }
  return params_.major_radius;
}

double LevelSetSurface::torus_minor_radius(double t) const {
  require_kind(is_torus(), "torus radii");
  if (kind_ == SurfaceKind::ConstantAreaTorus) {
    return params_.minor_radius / (1.0 + params_.growth_rate * t);
  }
  return params_.minor_radius + params_.minor_amplitude * std::sin(params_.frequency * t);
}

double LevelSetSurface::torus_major_rate(double /*t*/) const {
  require_kind(is_torus(), "torus radii");
  if (kind_ == SurfaceKind::ConstantAreaTorus) return params_.major_radius * params_.growth_rate;
  return 0.0;
}

double LevelSetSurface::torus_minor_rate(double t) const {
  require_kind(is_torus(), "torus radii");
  if (kind_ == SurfaceKind::ConstantAreaTorus) {
    const double s = 1.0 + params_.growth_rate * t;
    return -params_.minor_radius * params_.growth_rate / (s * s);
  }
  return params_.minor_amplitude * params_.frequency * std::cos(params_.frequency * t);
}

double LevelSetSurface::exact_area(double t) const {
  if (is_sphere()) {
    const double r = sphere_radius(t);
    return 4.0 * kPi * r * r;
  }
  return 4.0 * kPi * kPi * torus_major_radius(t) * torus_minor_radius(t);
}

double LevelSetSurface::level_set_value(const Vec3& x, double t) const {
  switch (kind_) {
    case SurfaceKind::OscillatingSphere:
      return dot(x, x) - params_.sphere_base -
             params_.sphere_amplitude * std::cos(params_.frequency * t);
    case SurfaceKind::StaticSphere:
      return dot(x, x) - params_.radius * params_.radius;
    case SurfaceKind::ConstantAreaTorus:
    case SurfaceKind::PeriodicTorus: {
      const double rho = std::hypot(x.x, x.y);
      const double d = rho - torus_major_radius(t);
      const double r = torus_minor_radius(t);
      return d * d + x.z * x.z - r * r;
    }
  }
  return 0.0;
}

Vec3 LevelSetSurface::level_set_gradient(const Vec3& x, double t) const {
  Vec3 g;
  if (is_sphere()) {
    g = 2.0 * x;
  } else {
    const double rho = std::hypot(x.x, x.y);
    if (rho < 1e-14) fail(ErrorCode::SingularPoint, "torus axis " + describe(x, t));
    const double d = rho - torus_major_radius(t);
    g = {2.0 * d * x.x / rho, 2.0 * d * x.y / rho, 2.0 * x.z};
  }
  if (norm(g) < 1e-12) fail(ErrorCode::SingularPoint, "vanishing gradient " + describe(x, t));
  return g;
}

Vec3 LevelSetSurface::unit_normal(const Vec3& x, double t) const {
  const Vec3 g = level_set_gradient(x, t);
  return g / norm(g);
}

Vec3 LevelSetSurface::project_to_surface(const Vec3& x, double t) const {
  Vec3 p = x;
  double phi = level_set_value(p, t);
  for (int it = 0; it < kProjectionMaxIterations; ++it) {
    if (std::abs(phi) <= kProjectionTolerance) return p;
    const Vec3 g = level_set_gradient(p, t);
    const Vec3 step = (phi / dot(g, g)) * g;
    double damping = 1.0;
    Vec3 trial = p - step;
    double trial_phi = level_set_value(trial, t);
    for (int halving = 0; halving < 30 && !(std::abs(trial_phi) < std::abs(phi)); ++halving) {
      damping *= 0.5;
      trial = p - damping * step;
      trial_phi = level_set_value(trial, t);
    }
    p = trial;
    phi = trial_phi;
  }
  if (std::abs(phi) <= kProjectionTolerance) return p;
  fail(ErrorCode::NoConvergence, "projection did not converge from " + describe(x, t));
}

void LevelSetSurface::require_on_surface(const Vec3& x, double t) const {
  const double phi = level_set_value(x, t);
  if (!(std::abs(phi) <= kOnSurfaceTolerance)) {
    std::ostringstream os;
    os << "point " << describe(x, t) << " has level-set value " << phi;
    fail(ErrorCode::OffSurface, os.str());
  }
}

Vec3 LevelSetSurface::move_node(const Vec3& x0, double t0, double t1) const {
  require_on_surface(x0, t0);
  if (t0 == t1) return x0;
  if (is_sphere()) return x0 * (sphere_radius(t1) / sphere_radius(t0));

  const double rho = std::hypot(x0.x, x0.y);
  const double psi = std::atan2(x0.z, rho - torus_major_radius(t0));
  const double rho1 = torus_major_radius(t1) + torus_minor_radius(t1) * std::cos(psi);
  return {rho1 * x0.x / rho, rho1 * x0.y / rho, torus_minor_radius(t1) * std::sin(psi)};
}

Vec3 LevelSetSurface::node_velocity(const Vec3& x, double t) const {
  require_on_surface(x, t);
  if (is_sphere()) return x * (sphere_radius_rate(t) / sphere_radius(t));

  const double rho = std::hypot(x.x, x.y);
  const double psi = std::atan2(x.z, rho - torus_major_radius(t));
  const double rho_rate = torus_major_rate(t) + torus_minor_rate(t) * std::cos(psi);
  return {rho_rate * x.x / rho, rho_rate * x.y / rho, torus_minor_rate(t) * std::sin(psi)};
}

}  // namespace escher
