#include "escher/eoc_study.hpp"

#include <future>
#include <sstream>

#include "escher/error.hpp"

namespace escher {

namespace {

struct LevelRun {
  PhaseState final_state;
  double tau = 0.0;
  int steps = 0;
};

LevelRun run_level(const EocStudyConfig& study, const SurfaceMesh& mesh, int steps,
                   SchemeKind scheme, const std::string& label) {
  try {
    SchemeConfig cfg = study.scheme;
    cfg.scheme = scheme;
    cfg.tau = cfg.final_time / steps;
    cfg.snapshot_every = 0;
    const auto alpha0 =
        study.ritz_initial_data
            ? ritz_projection(mesh, study.initial.value, study.initial.gradient)
            : initial_data_interpolate(mesh, study.initial.value);
    auto run = run_simulation(cfg, study.potential, mesh, alpha0);
    return {std::move(run.final_state), cfg.tau, steps};
  } catch (const Error& e) {
    throw Error(e.code(), label + ": " + e.what());
  }
}

}  // namespace

EocStudyResult eoc_study(const EocStudyConfig& config, const SurfaceMesh& coarse_mesh) {
  if (config.levels < 2) fail(ErrorCode::InvalidArgument, "an EOC study needs at least 2 levels");
  if (config.coarse_steps < 1) fail(ErrorCode::InvalidArgument, "coarse_steps must be positive");
  if (!(config.scheme.final_time > 0.0)) {
    fail(ErrorCode::InvalidArgument, "an EOC study needs a positive final time");
  }
  auto log = [&](const std::string& msg) {
    if (config.log) config.log(msg);
  };

  const MeshHierarchy hierarchy(coarse_mesh, config.levels);
  const auto ref_level = static_cast<std::size_t>(config.levels);

  std::vector<int> steps(config.levels);
  for (int l = 0; l < config.levels; ++l) steps[l] = config.coarse_steps << (2 * l);
  const int reference_steps =
      config.reference_steps > 0 ? config.reference_steps : 4 * steps.back();

  auto level_task = [&](int l) {
    return run_level(config, hierarchy.level(l), steps[l], config.scheme.scheme,
                     "level " + std::to_string(l));
  };
  auto reference_task = [&] {
    return run_level(config, hierarchy.level(ref_level), reference_steps,
                     config.reference_scheme, "reference");
  };

  const bool have_reference = config.reference.has_value();
  if (have_reference &&
      config.reference->alpha.size() != hierarchy.level(ref_level).node_count()) {
    fail(ErrorCode::LengthMismatch, "supplied reference does not match the reference mesh");
  }
  std::vector<LevelRun> runs;
  LevelRun reference;
  if (have_reference) {
    reference.final_state = *config.reference;
    reference.steps = reference_steps;
    reference.tau = config.scheme.final_time / reference_steps;
  }
  if (config.parallel_levels) {
    std::future<LevelRun> ref_future;
    if (!have_reference) ref_future = std::async(std::launch::async, reference_task);
    std::vector<std::future<LevelRun>> futures;
    for (int l = 0; l < config.levels; ++l) {
      futures.push_back(std::async(std::launch::async, level_task, l));
    }
    for (auto& f : futures) runs.push_back(f.get());
    if (!have_reference) reference = ref_future.get();
  } else {
    for (int l = 0; l < config.levels; ++l) {
      log("level " + std::to_string(l) + ": " + std::to_string(hierarchy.level(l).node_count()) +
          " nodes, " + std::to_string(steps[l]) + " steps");
      runs.push_back(level_task(l));
    }
    if (!have_reference) {
      log("reference: " + std::to_string(hierarchy.level(ref_level).node_count()) +
          " nodes, " + std::to_string(reference_steps) + " steps");
      reference = reference_task();
    }
  }

  const SurfaceMesh ref_mesh = advance_mesh(hierarchy.level(ref_level),
                                            hierarchy.level(ref_level).time() +
                                                config.scheme.final_time);
  const auto ops = assemble_operators(ref_mesh);

  EocStudyResult result;
  result.reference_nodes = ref_mesh.node_count();
  result.reference_h = mesh_size_h(hierarchy.level(ref_level));
  result.reference_tau = reference.tau;
  std::vector<double> hs, eu, ew, eu1, ew1;
  for (int l = 0; l < config.levels; ++l) {
    const auto u = hierarchy.prolong_to(l, ref_level, runs[l].final_state.alpha);
    const auto w = hierarchy.prolong_to(l, ref_level, runs[l].final_state.beta);
    EocLevelResult lr;
    lr.level = l;
    lr.nodes = hierarchy.level(l).node_count();
    lr.h = mesh_size_h(hierarchy.level(l));
    lr.tau = runs[l].tau;
    lr.steps = runs[l].steps;
    lr.u_l2 = l2_error(ops, u, reference.final_state.alpha);
    lr.w_l2 = l2_error(ops, w, reference.final_state.beta);
    lr.u_h1 = h1_semi_error(ops, u, reference.final_state.alpha);
    lr.w_h1 = h1_semi_error(ops, w, reference.final_state.beta);
    std::ostringstream os;
    os.precision(6);
    os << "level " << l << ": h = " << lr.h << ", |u - u_ref| = " << lr.u_l2
       << ", |w - w_ref| = " << lr.w_l2;
    log(os.str());
    hs.push_back(lr.h);
    eu.push_back(lr.u_l2);
    ew.push_back(lr.w_l2);
    eu1.push_back(lr.u_h1);
    ew1.push_back(lr.w_h1);
    result.levels.push_back(lr);
  }
  result.reference_state = std::move(reference.final_state);
  result.u = eoc(eu, hs, NormKind::L2, "u");
  result.w = eoc(ew, hs, NormKind::L2, "w");
  result.u_h1 = eoc(eu1, hs, NormKind::H1Semi, "u");
  result.w_h1 = eoc(ew1, hs, NormKind::H1Semi, "w");
  return result;
}

}  // namespace escher
