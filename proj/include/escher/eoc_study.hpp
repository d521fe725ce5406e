#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "escher/diagnostics.hpp"
#include "escher/mesh.hpp"
#include "escher/potential.hpp"
#include "escher/scheme.hpp"
#include "escher/simulation.hpp"

namespace escher {

/// Convergence study against a fine reference solution. Level l (0-based) is the coarse mesh
/// refined l times and takes coarse_steps * 4^l time steps, so tau scales like h^2. The
/// reference lives one refinement above the finest level and uses the fully implicit scheme.
struct EocStudyConfig {
  SchemeConfig scheme;  // epsilon, final_time, scheme kind and Newton settings; tau is derived
  Potential potential = Potential::quartic();
  InitialData initial = initial_data_from_name("sphere_eoc");
  bool ritz_initial_data = false;
  int levels = 4;
  int coarse_steps = 16;
  int reference_steps = 0;  // 0 means 4x the finest level
  SchemeKind reference_scheme = SchemeKind::FullyImplicit;
  bool parallel_levels = false;
  // Terminal reference state from an earlier study with the same hierarchy, final time and
  // reference settings; when set the reference run is skipped.
  std::optional<PhaseState> reference;
  std::function<void(const std::string&)> log;
};

struct EocLevelResult {
  int level = 0;
  std::size_t nodes = 0;
  double h = 0.0;  // at the initial time
  double tau = 0.0;
  int steps = 0;
  double u_l2 = 0.0;
  double w_l2 = 0.0;
  double u_h1 = 0.0;
  double w_h1 = 0.0;
};

struct EocStudyResult {
  EocTable u;  // L2
  EocTable w;  // L2
  EocTable u_h1;
  EocTable w_h1;
  std::vector<EocLevelResult> levels;
  std::size_t reference_nodes = 0;
  double reference_h = 0.0;
  double reference_tau = 0.0;
  PhaseState reference_state;
};

/// Runs every level and the reference, prolongs each terminal state to the reference mesh and
/// measures the error there at the final time. Errors are rethrown labelled with the level.
EocStudyResult eoc_study(const EocStudyConfig& config, const SurfaceMesh& coarse_mesh);

}  // namespace escher
