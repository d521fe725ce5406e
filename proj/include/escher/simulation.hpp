#pragma once

#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "escher/diagnostics.hpp"
#include "escher/mesh.hpp"
#include "escher/potential.hpp"
#include "escher/scheme.hpp"

namespace escher {

using ScalarField = std::function<double(const Vec3&)>;
using VectorField = std::function<Vec3(const Vec3&)>;

/// A smooth ambient function with its ambient gradient (used for the Ritz projection).
struct InitialData {
  std::string name;
  ScalarField value;
  VectorField gradient;
};

/// Built-in initial data: "sphere_eoc" = 0.5 x sin(pi y), "torus" = 0.5 x y sin(10 pi z),
/// "constant" = `constant`. Throws ValidationError for unknown names.
InitialData initial_data_from_name(std::string_view name, double constant = 0.0);

/// Lagrange interpolant: alpha_i = u0(x_i).
std::vector<double> initial_data_interpolate(const SurfaceMesh& mesh, const ScalarField& u0);

/// Ritz projection: a_h(Pi z, phi) = int_{Gamma_h} grad z . grad phi, with
/// int_{Gamma_h} Pi z = int_{Gamma_h} z (both integrals by quadrature on the discrete surface).
std::vector<double> ritz_projection(const SurfaceMesh& mesh, const ScalarField& z,
                                    const VectorField& grad_z);

struct RunResult {
  std::vector<DiagnosticRecord> diagnostics;  // step 0 .. N_T
  PhaseState final_state;
  SurfaceMesh final_mesh;
};

struct RunOptions {
  bool record_hminus1 = false;
  /// Called for step 0 and every `snapshot_every` steps (and the last step) when enabled.
  std::function<void(const SurfaceMesh&, const PhaseState&)> on_snapshot;
};

/// Time loop: advance the mesh, assemble, solve one step, record diagnostics.
/// Errors are rethrown with the failing step index in the message.
RunResult run_simulation(const SchemeConfig& config, const Potential& potential,
                         const SurfaceMesh& initial_mesh, std::span<const double> alpha0,
                         const RunOptions& options = {});

}  // namespace escher
