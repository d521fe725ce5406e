#include "escher/simulation.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "escher/error.hpp"
#include "escher/linear_solvers.hpp"

namespace escher {

namespace {

constexpr double kPi = std::numbers::pi;

DiagnosticRecord record(const SurfaceMesh& mesh, const AssembledOperators& ops,
                        const PhaseState& state, const SchemeConfig& config,
                        const Potential& potential, int newton_iterations, bool hminus1) {
  DiagnosticRecord r;
  r.step = state.step;
  r.time = state.time;
  r.energy = ginzburg_landau_energy(mesh, ops, state.alpha, potential, config.epsilon);
  r.mass = discrete_mass(ops, state.alpha);
  r.area = surface_area(mesh);
  r.h = mesh_size_h(mesh);
  r.newton_iterations = newton_iterations;
  if (hminus1) r.hminus1_norm = hminus1_norm(ops, remove_mean(ops, state.alpha));
  return r;
}

}  // namespace

InitialData initial_data_from_name(std::string_view name, double constant) {
  if (name == "sphere_eoc") {
    return {"sphere_eoc", [](const Vec3& p) { return 0.5 * p.x * std::sin(kPi * p.y); },
            [](const Vec3& p) {
              return Vec3{0.5 * std::sin(kPi * p.y), 0.5 * kPi * p.x * std::cos(kPi * p.y), 0.0};
            }};
  }
  if (name == "torus") {
    return {"torus", [](const Vec3& p) { return 0.5 * p.x * p.y * std::sin(10.0 * kPi * p.z); },
            [](const Vec3& p) {
              const double s = std::sin(10.0 * kPi * p.z);
              return Vec3{0.5 * p.y * s, 0.5 * p.x * s,
                          5.0 * kPi * p.x * p.y * std::cos(10.0 * kPi * p.z)};
            }};
  }
  if (name == "constant") {
    return {"constant", [constant](const Vec3&) { return constant; },
            [](const Vec3&) { return Vec3{}; }};
  }
  fail(ErrorCode::ValidationError, "initial_data: unknown initial data '" + std::string(name) + "'");
}

std::vector<double> initial_data_interpolate(const SurfaceMesh& mesh, const ScalarField& u0) {
  std::vector<double> alpha;
  alpha.reserve(mesh.node_count());
  for (const auto& p : mesh.nodes()) alpha.push_back(u0(p));
  return alpha;
}

std::vector<double> ritz_projection(const SurfaceMesh& mesh, const ScalarField& z,
                                    const VectorField& grad_z) {
  const auto rule = quadrature_rule(4);
  std::vector<double> rhs(mesh.node_count(), 0.0);
  double mean_target = 0.0;
  for (std::size_t k = 0; k < mesh.triangle_count(); ++k) {
    const auto& tri = mesh.triangles()[k];
    const auto p = mesh.corners(k);
    const Vec3 n_scaled = cross(p[1] - p[0], p[2] - p[0]);  // 2|K| times the unit normal
    const double area = 0.5 * norm(n_scaled);
    if (!(area > 1e-14)) fail(ErrorCode::DegenerateTriangle, "degenerate triangle in Ritz load");
    const Vec3 unit_n = n_scaled / (2.0 * area);
    const std::array<Vec3, 3> edge = {p[2] - p[1], p[0] - p[2], p[1] - p[0]};
    std::array<Vec3, 3> grad_phi;
    for (int i = 0; i < 3; ++i) grad_phi[i] = cross(unit_n, edge[i]) / (2.0 * area);

    for (std::size_t q = 0; q < rule.weights.size(); ++q) {
      const auto& l = rule.points[q];
      const Vec3 x = l[0] * p[0] + l[1] * p[1] + l[2] * p[2];
      const double w = rule.weights[q] * area;
      const Vec3 g = grad_z(x);
      for (int i = 0; i < 3; ++i) rhs[tri[i]] += w * dot(g, grad_phi[i]);
      mean_target += w * z(x);
    }
  }
  const auto ops = assemble_operators(mesh);
  // the load of a gradient sums to zero up to roundoff; remove that roundoff
  const double drift = sum(rhs) / static_cast<double>(rhs.size());
  for (auto& v : rhs) v -= drift;
  auto x = solve_mean_zero_spd(ops.stiffness, rhs, ops.mass);
  const double area = sum(ops.mass * std::vector<double>(x.size(), 1.0));
  const double shift = (mean_target - sum(ops.mass * x)) / area;
  for (auto& v : x) v += shift;
  return x;
}

RunResult run_simulation(const SchemeConfig& config, const Potential& potential,
                         const SurfaceMesh& initial_mesh, std::span<const double> alpha0,
                         const RunOptions& options) {
  config.validate();
  if (alpha0.size() != initial_mesh.node_count()) {
    fail(ErrorCode::LengthMismatch, "initial data does not match node count");
  }
  const int steps = config.step_count();
  const double t0 = initial_mesh.time();

  SurfaceMesh mesh = initial_mesh;
  AssembledOperators ops = assemble_operators(mesh);
  PhaseState state;
  state.alpha.assign(alpha0.begin(), alpha0.end());
  state.beta = chemical_potential(mesh, ops, state.alpha, config.epsilon, potential);
  state.time = t0;
  state.step = 0;

  RunResult result{{}, {}, mesh};
  result.diagnostics.push_back(
      record(mesh, ops, state, config, potential, 0, options.record_hminus1));
  const bool snapshots = options.on_snapshot && config.snapshot_every > 0;
  if (snapshots) options.on_snapshot(mesh, state);

  CahnHilliardStepper stepper(config, potential);
  for (int n = 1; n <= steps; ++n) {
    try {
      const double t =
          n == steps ? t0 + config.final_time : t0 + config.final_time * n / steps;
      const auto mass_alpha = ops.mass * state.alpha;
      SurfaceMesh next = advance_mesh(mesh, t);
      AssembledOperators next_ops = assemble_operators(next);
      auto step = stepper.step(next, next_ops, mass_alpha, state);
      mesh = std::move(next);
      ops = std::move(next_ops);
      state = std::move(step.state);
      result.diagnostics.push_back(record(mesh, ops, state, config, potential,
                                          step.newton.iterations, options.record_hminus1));
      if (snapshots && (n % config.snapshot_every == 0 || n == steps)) {
        options.on_snapshot(mesh, state);
      }
    } catch (const Error& e) {
      throw Error(e.code(), "step " + std::to_string(n) + ": " + e.what());
    }
  }
  result.final_state = std::move(state);
  result.final_mesh = std::move(mesh);
  return result;
}

}  // namespace escher
