#pragma once

#include <string>
#include <string_view>

#include "escher/eoc_study.hpp"
#include "escher/linear_solvers.hpp"
#include "escher/mesh.hpp"
#include "escher/scheme.hpp"
#include "escher/surface.hpp"

namespace escher {

enum class InitialProjection { Interpolate, Ritz };

/// Everything a `run`, `eoc` or `mesh-info` invocation needs.
///
/// File grammar: one `key = value` per line, `#` starts a comment, sections are written as
/// dotted key prefixes (`mesh.subdivisions = 3`). Keys may appear at most once.
struct RunConfig {
  SurfaceKind surface = SurfaceKind::OscillatingSphere;
  double surface_radius = 1.0;  // static_sphere only

  int subdivisions = 3;  // spheres
  int n_major = 64;      // tori
  int n_minor = 47;

  double epsilon = 0.05;
  double theta = 1.0;
  std::string potential = "quartic";

  double tau = 1e-4;
  double final_time = 0.1;
  SchemeKind scheme = SchemeKind::FullyImplicit;

  std::string initial_data = "sphere_eoc";
  double initial_constant = 0.0;
  InitialProjection initial_projection = InitialProjection::Interpolate;

  double newton_tol = 1e-11;
  int newton_max_iter = 25;
  LinearSolverKind linear_solver = LinearSolverKind::SparseLu;

  std::string output_directory = "output";
  int snapshot_every = 0;

  int eoc_levels = 4;
  int eoc_coarse_steps = 16;
  int eoc_reference_steps = 0;

  unsigned long seed = 0;  // reserved

  friend bool operator==(const RunConfig&, const RunConfig&) = default;

  SchemeConfig scheme_config() const;
  Potential make_potential() const;
  LevelSetSurface make_surface() const;
  InitialData make_initial_data() const;
  /// Icosphere or structured torus grid at t = 0.
  SurfaceMesh make_mesh() const;
  EocStudyConfig eoc_config() const;

  /// Throws ValidationError naming the field.
  void validate() const;
};

/// Throws ParseError (with line number) for malformed lines, unknown or repeated keys and
/// unparsable values; ValidationError for values outside their domain.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);

/// Emits every field; parse_config(emit_config(c)) == c.
std::string emit_config(const RunConfig& config);

}  // namespace escher
