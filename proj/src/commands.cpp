#include "escher/commands.hpp"

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <iomanip>

#include "escher/error.hpp"
#include "escher/output.hpp"

namespace escher {

namespace {

void ensure_directory(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) fail(ErrorCode::IoError, "cannot create directory '" + dir + "': " + ec.message());
}

std::string snapshot_path(const std::string& dir, int step) {
  char name[64];
  std::snprintf(name, sizeof(name), "snapshot_%06d.vtk", step);
  return (std::filesystem::path(dir) / name).string();
}

void print_table(std::ostream& out, const EocTable& table) {
  out << "EOC for " << table.variable << " (" << to_string(table.norm) << ")\n";
  out << std::setw(16) << "h" << std::setw(16) << "error" << std::setw(12) << "EOC" << '\n';
  for (const auto& row : table.rows) {
    out << std::scientific << std::setprecision(6) << std::setw(16) << row.h << std::setw(16)
        << row.error << std::defaultfloat << std::setw(12);
    if (row.eoc) {
      out << std::fixed << std::setprecision(6) << *row.eoc << std::defaultfloat;
    } else {
      out << "-";
    }
    out << '\n';
  }
}

}  // namespace

RunResult cmd_run(const RunConfig& config, std::ostream& log) {
  config.validate();
  const auto scheme = config.scheme_config();
  const auto potential = config.make_potential();
  for (const auto& w : scheme.warnings(potential)) log << "warning: " << w << '\n';

  const SurfaceMesh mesh = config.make_mesh();
  const auto initial = config.make_initial_data();
  const auto alpha0 = config.initial_projection == InitialProjection::Ritz
                          ? ritz_projection(mesh, initial.value, initial.gradient)
                          : initial_data_interpolate(mesh, initial.value);

  ensure_directory(config.output_directory);
  RunOptions options;
  options.on_snapshot = [&](const SurfaceMesh& m, const PhaseState& s) {
    const NamedArray arrays[] = {{"u", s.alpha}, {"w", s.beta}};
    write_vtk(snapshot_path(config.output_directory, s.step), m, arrays,
              "escher t=" + std::to_string(s.time));
  };
  log << "run: " << to_string(config.surface) << ", " << mesh.node_count() << " nodes, "
      << scheme.step_count() << " steps of " << to_string(config.scheme) << '\n';
  auto result = run_simulation(scheme, potential, mesh, alpha0, options);
  const auto csv = (std::filesystem::path(config.output_directory) / "diagnostics.csv").string();
  write_diagnostics_csv(csv, result.diagnostics);
  log << "wrote " << csv << '\n';
  return result;
}

EocStudyResult cmd_eoc(const RunConfig& config, bool parallel_levels, std::ostream& log) {
  config.validate();
  auto study = config.eoc_config();
  study.parallel_levels = parallel_levels;
  study.log = [&log](const std::string& msg) { log << msg << '\n'; };
  for (const auto& w : study.scheme.warnings(study.potential)) log << "warning: " << w << '\n';

  ensure_directory(config.output_directory);
  const auto result = eoc_study(study, config.make_mesh());
  const std::filesystem::path dir(config.output_directory);
  write_eoc_csv((dir / "eoc_u.csv").string(), result.u);
  write_eoc_csv((dir / "eoc_w.csv").string(), result.w);
  print_table(log, result.u);
  print_table(log, result.w);
  return result;
}

void cmd_mesh_info(const RunConfig& config, std::ostream& out) {
  config.validate();
  const auto mesh = config.make_mesh();
  const double h = mesh_size_h(mesh);
  out << std::setprecision(10);
  out << "surface:          " << to_string(config.surface) << '\n'
      << "nodes:            " << mesh.node_count() << '\n'
      << "triangles:        " << mesh.triangle_count() << '\n'
      << "h:                " << h << '\n'
      << "area:             " << surface_area(mesh) << '\n'
      << "exact area:       " << mesh.surface().exact_area(mesh.time()) << '\n'
      << "min inradius / h: " << min_inradius(mesh) / h << '\n'
      << "admissible:       " << (is_admissible(mesh) ? "yes" : "no") << '\n';
}

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cahn-Hilliard equation on evolving surfaces (ESFEM)", "escher"};
  app.require_subcommand(1);

  std::string config_path;
  std::string output_dir;
  auto* run = app.add_subcommand("run", "run one simulation");
  run->add_option("config", config_path, "configuration file")->required();
  run->add_option("--output", output_dir, "override output.directory");

  int levels = 0;
  bool imex = false;
  bool parallel_levels = false;
  auto* eoc_cmd = app.add_subcommand("eoc", "experimental order of convergence study");
  eoc_cmd->add_option("config", config_path, "configuration file")->required();
  eoc_cmd->add_option("--levels", levels, "number of refinement levels")->check(CLI::Range(2, 8));
  eoc_cmd->add_flag("--imex", imex, "use the implicit-explicit scheme on the study levels");
  eoc_cmd->add_flag("--parallel-levels", parallel_levels, "run levels concurrently");
  eoc_cmd->add_option("--output", output_dir, "override output.directory");

  auto* info = app.add_subcommand("mesh-info", "print mesh statistics");
  info->add_option("config", config_path, "configuration file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfigError;
  }

  try {
    RunConfig config = load_config(config_path);
    if (!output_dir.empty()) config.output_directory = output_dir;
    if (run->parsed()) {
      cmd_run(config, out);
    } else if (eoc_cmd->parsed()) {
      if (levels > 0) config.eoc_levels = levels;
      if (imex) config.scheme = SchemeKind::Imex;
      cmd_eoc(config, parallel_levels, out);
    } else {
      cmd_mesh_info(config, out);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.is_config_error() ? kExitConfigError : kExitSolverFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitSolverFailure;
  }
  return kExitOk;
}

}  // namespace escher
