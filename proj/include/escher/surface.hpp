#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "escher/vec3.hpp"

namespace escher {

enum class SurfaceKind { OscillatingSphere, ConstantAreaTorus, PeriodicTorus, StaticSphere };

std::string_view to_string(SurfaceKind kind);
std::optional<SurfaceKind> surface_kind_from_string(std::string_view name);

/// Named shape parameters. Only the fields relevant to a kind are read.
struct SurfaceParameters {
  // Spheres: |x|^2 - (base + amplitude cos(frequency t)); the static sphere uses `radius`.
  double radius = 1.0;
  double sphere_base = 0.9;
  double sphere_amplitude = 0.1;
  double frequency = 20.0 * 3.14159265358979323846;
  // Tori.
  double major_radius = 0.75;
  double minor_radius = 0.25;
  double growth_rate = 4.0 / 3.0;  // constant-area torus: R(t) = R0 (1 + g t), r(t) = r0 / (1 + g t)
  double minor_amplitude = 0.1;    // periodic torus: r(t) = r0 + a sin(frequency t)
};

/// Analytic closed surface Gamma(t) given as the zero level set of phi(x, t), together with an
/// exact node motion x0 -> x1 that maps Gamma(t0) onto Gamma(t1).
class LevelSetSurface {
 public:
  LevelSetSurface(SurfaceKind kind, SurfaceParameters params);

  static LevelSetSurface oscillating_sphere();
  static LevelSetSurface constant_area_torus();
  static LevelSetSurface periodic_torus();
  static LevelSetSurface static_sphere(double radius = 1.0);

  SurfaceKind kind() const { return kind_; }
  const SurfaceParameters& parameters() const { return params_; }
  bool is_sphere() const;
  bool is_torus() const;

  double level_set_value(const Vec3& x, double t) const;

  /// Throws SingularPoint where the gradient (nearly) vanishes.
  Vec3 level_set_gradient(const Vec3& x, double t) const;

  Vec3 unit_normal(const Vec3& x, double t) const;

  /// Damped Newton along grad(phi) until |phi| <= 1e-12. Throws NoConvergence after 50 steps.
  Vec3 project_to_surface(const Vec3& x, double t) const;

  /// Parametric motion: radial scaling for spheres, angle-preserving map for tori.
  /// Throws OffSurface if x0 is not on Gamma(t0).
  Vec3 move_node(const Vec3& x0, double t0, double t1) const;

  /// d/ds move_node(x, t, s) at s = t.
  Vec3 node_velocity(const Vec3& x, double t) const;

  /// Sphere radius at time t. Spheres only; WrongSurfaceKind otherwise.
  double sphere_radius(double t) const;
  double sphere_radius_rate(double t) const;
  /// Torus major/minor radii and their time derivatives. Tori only; WrongSurfaceKind otherwise.
  double torus_major_radius(double t) const;
  double torus_minor_radius(double t) const;
  double torus_major_rate(double t) const;
  double torus_minor_rate(double t) const;

  /// Exact area of Gamma(t).
  double exact_area(double t) const;

  static constexpr double kProjectionTolerance = 1e-12;
  static constexpr int kProjectionMaxIterations = 50;
  /// Level-set residual above which a point no longer counts as lying on the surface.
  static constexpr double kOnSurfaceTolerance = 1e-8;

 private:
  void require_on_surface(const Vec3& x, double t) const;
  void require_kind(bool ok, const char* what) const;

  SurfaceKind kind_;
  SurfaceParameters params_;
};

}  // namespace escher
