#pragma once

#include <optional>
#include <ostream>
#include <string>

#include "escher/config.hpp"
#include "escher/eoc_study.hpp"
#include "escher/simulation.hpp"

namespace escher {

enum ExitCode : int { kExitOk = 0, kExitConfigError = 2, kExitSolverFailure = 3 };

/// Runs one simulation and writes <output>/diagnostics.csv plus VTK snapshots
/// (<output>/snapshot_NNNNNN.vtk with point arrays "u" and "w") when snapshots are enabled.
RunResult cmd_run(const RunConfig& config, std::ostream& log);

/// Runs a convergence study and writes <output>/eoc_u.csv and <output>/eoc_w.csv.
EocStudyResult cmd_eoc(const RunConfig& config, bool parallel_levels, std::ostream& log);

/// Prints mesh statistics for the configured surface and mesh.
void cmd_mesh_info(const RunConfig& config, std::ostream& out);

/// Command-line entry point: `run <config>`, `eoc <config> --levels N [--imex]`,
/// `mesh-info <config>`. Returns 0 on success, 2 on configuration errors, 3 on solver failures.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace escher
