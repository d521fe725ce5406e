#include "escher/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "escher/error.hpp"

namespace escher {

namespace {

bool all_finite(std::span<const double> v) {
  for (double x : v) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

[[noreturn]] void validation_error(const std::string& field, const std::string& why) {
  throw Error(ErrorCode::ValidationError, field + ": " + why);
}

constexpr double kMinNewtonDamping = 1.0 / 64.0;
constexpr double kMinContinuationIncrement = 1.0 / 256.0;

}  // namespace

std::string_view to_string(SchemeKind kind) {
  return kind == SchemeKind::FullyImplicit ? "fully_implicit" : "imex";
}

std::optional<SchemeKind> scheme_kind_from_string(std::string_view name) {
  if (name == "fully_implicit") return SchemeKind::FullyImplicit;
  if (name == "imex") return SchemeKind::Imex;
  return std::nullopt;
}

int SchemeConfig::step_count() const {
  if (!(tau > 0.0)) validation_error("tau", "must be positive");
  if (final_time == 0.0) return 0;
  const double ratio = final_time / tau;
  const double n = std::round(ratio);
  if (n < 1.0 || std::abs(n - ratio) > 1e-9 * std::max(1.0, ratio)) {
    std::ostringstream os;
    os << "tau = " << tau << " does not divide final time " << final_time;
    validation_error("tau", os.str());
  }
  return static_cast<int>(n);
}

void SchemeConfig::validate() const {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) validation_error("epsilon", "must be positive");
  if (!(tau > 0.0) || !std::isfinite(tau)) validation_error("tau", "must be positive");
  if (!(final_time >= 0.0) || !std::isfinite(final_time)) {
    validation_error("final_time", "must be non-negative");
  }
  if (final_time > 0.0 && tau > final_time) validation_error("tau", "exceeds final time");
  if (!(newton_tol > 0.0)) validation_error("newton_tol", "must be positive");
  if (newton_max_iter < 1) validation_error("newton_max_iter", "must be at least 1");
  if (snapshot_every < 0) validation_error("snapshot_every", "must be non-negative");
  step_count();
}

std::vector<std::string> SchemeConfig::warnings(const Potential& potential) const {
  std::vector<std::string> out;
  const double bound = uniqueness_timestep_bound(epsilon, potential.theta);
  if (scheme == SchemeKind::FullyImplicit && !(tau < bound)) {
    std::ostringstream os;
    os << "tau = " << tau << " is not below 4 eps^3 / theta^2 = " << bound
       << "; the fully implicit step may not have a unique solution";
    out.push_back(os.str());
  }
  return out;
}

CahnHilliardStepper::CahnHilliardStepper(SchemeConfig config, Potential potential)
    : config_(config), potential_(std::move(potential)) {}

std::vector<double> CahnHilliardStepper::residual(const SurfaceMesh& next,
                                                  const AssembledOperators& ops,
                                                  std::span<const double> previous_mass_alpha,
                                                  std::span<const double> alpha,
                                                  std::span<const double> beta) const {
  return residual_for(config_.scheme == SchemeKind::FullyImplicit ? 1.0 : 0.0, next, ops,
                      previous_mass_alpha, alpha, beta);
}

std::vector<double> CahnHilliardStepper::residual_for(double implicit_weight,
                                                      const SurfaceMesh& next,
                                                      const AssembledOperators& ops,
                                                      std::span<const double> previous_mass_alpha,
                                                      std::span<const double> alpha,
                                                      std::span<const double> beta) const {
  const std::size_t n = ops.node_count;
  const double eps = config_.epsilon;
  const double tau = config_.tau;
  const double c = implicit_weight * potential_.theta / eps;
  const double c_explicit = (1.0 - implicit_weight) * potential_.theta / eps;

  const auto m_alpha = ops.mass * alpha;
  const auto m_beta = ops.mass * beta;
  const auto a_alpha = ops.stiffness * alpha;
  const auto a_beta = ops.stiffness * beta;
  const auto load = assemble_nonlinear_load(next, alpha, potential_);

  std::vector<double> r(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    r[i] = m_alpha[i] + tau * a_beta[i] - previous_mass_alpha[i];
    r[n + i] = -eps * a_alpha[i] + c * m_alpha[i] + m_beta[i] - load[i] / eps +
               c_explicit * previous_mass_alpha[i];
  }
  return r;
}

std::vector<double> CahnHilliardStepper::solve_linear(const SparseMatrix& jacobian,
                                                      std::span<const double> rhs) {
  const bool iterative = config_.linear_solver == LinearSolverKind::BiCgStab ||
                         static_cast<std::size_t>(jacobian.rows() / 2) > config_.iterative_threshold;
  if (iterative) return bicgstab(jacobian, rhs, 1e-13, 0);
  lu_.factorize(jacobian);
  return lu_.solve(rhs);
}

StepResult CahnHilliardStepper::step(const SurfaceMesh& next, const AssembledOperators& ops,
                                     std::span<const double> previous_mass_alpha,
                                     const PhaseState& state, const PhaseState* guess) {
  const std::size_t n = ops.node_count;
  if (next.node_count() != n || state.alpha.size() != n || previous_mass_alpha.size() != n) {
    fail(ErrorCode::LengthMismatch, "state does not match mesh");
  }
  if (!ops.stiffness.same_pattern(ops.mass)) {
    fail(ErrorCode::InvalidArgument, "operators do not share a sparsity pattern");
  }
  const PhaseState& start = guess ? *guess : state;
  if (start.alpha.size() != n) fail(ErrorCode::LengthMismatch, "Newton guess does not match mesh");

  StepResult result;
  result.state.alpha = start.alpha;
  result.state.beta = start.beta.size() == n ? start.beta : std::vector<double>(n, 0.0);
  const double target = config_.scheme == SchemeKind::FullyImplicit ? 1.0 : 0.0;
  std::string failure = newton(next, ops, previous_mass_alpha, target, result.state.alpha,
                               result.state.beta, result.newton);

  // The fully implicit problem is not monotone for large tau. Continuation from the convex
  // IMEX problem (weight 0) to the fully implicit one (weight 1) follows the solution branch.
  if (!failure.empty() && target == 1.0 && guess == nullptr) {
    std::vector<double> alpha = state.alpha;
    std::vector<double> beta = state.beta.size() == n ? state.beta : std::vector<double>(n, 0.0);
    int iterations = result.newton.iterations;
    NewtonReport report;
    failure = newton(next, ops, previous_mass_alpha, 0.0, alpha, beta, report);
    iterations += report.iterations;
    double weight = 0.0;
    double increment = 0.5;
    while (failure.empty() && weight < 1.0) {
      const double trial = std::min(1.0, weight + increment);
      std::vector<double> trial_alpha = alpha, trial_beta = beta;
      const std::string trial_failure =
          newton(next, ops, previous_mass_alpha, trial, trial_alpha, trial_beta, report);
      iterations += report.iterations;
      if (trial_failure.empty()) {
        weight = trial;
        alpha.swap(trial_alpha);
        beta.swap(trial_beta);
        increment = std::min(2.0 * increment, 0.5);
      } else if (increment > kMinContinuationIncrement) {
        increment *= 0.5;
      } else {
        failure = "continuation stalled at implicit weight " + std::to_string(weight) + ": " +
                  trial_failure;
      }
    }
    if (failure.empty()) {
      result.state.alpha = std::move(alpha);
      result.state.beta = std::move(beta);
      result.newton.residual_history = std::move(report.residual_history);
    }
    result.newton.iterations = iterations;
  }
  if (!failure.empty()) fail(ErrorCode::NewtonDivergence, failure);

  result.state.time = next.time();
  result.state.step = state.step + 1;
  return result;
}

std::string CahnHilliardStepper::newton(const SurfaceMesh& next, const AssembledOperators& ops,
                                        std::span<const double> previous_mass_alpha,
                                        double implicit_weight, std::vector<double>& alpha,
                                        std::vector<double>& beta, NewtonReport& report) {
  const std::size_t n = ops.node_count;
  const double eps = config_.epsilon;
  const double c = implicit_weight * potential_.theta / eps;
  const auto& m = ops.mass;
  const auto& a = ops.stiffness;

  // K = -eps A + c M - J / eps shares the pattern of M and A.
  SparseMatrix tau_a = a;
  for (auto& v : tau_a.mutable_values()) v *= config_.tau;
  SparseMatrix lower = a;

  report.iterations = 0;
  report.residual_history.clear();
  auto r = residual_for(implicit_weight, next, ops, previous_mass_alpha, alpha, beta);
  std::vector<double> trial_alpha(n), trial_beta(n);
  for (int it = 0;; ++it) {
    const double rnorm = norm_inf(r);
    report.residual_history.push_back(rnorm);
    report.iterations = it;
    if (!std::isfinite(rnorm)) {
      return "non-finite residual at Newton iteration " + std::to_string(it);
    }
    if (rnorm <= config_.newton_tol) return {};
    if (it >= config_.newton_max_iter) {
      std::ostringstream os;
      os << "no convergence in " << config_.newton_max_iter << " iterations (residual " << rnorm
         << ")";
      return os.str();
    }

    const auto jac = assemble_nonlinear_jacobian(next, alpha, potential_);
    if (!jac.same_pattern(m)) {
      fail(ErrorCode::InvalidArgument, "operators do not share a sparsity pattern");
    }
    auto lv = lower.mutable_values();
    for (std::size_t p = 0; p < lv.size(); ++p) {
      lv[p] = -eps * a.values()[p] + c * m.values()[p] - jac.values()[p] / eps;
    }
    const auto system = block_2x2(m, tau_a, lower, m);
    std::vector<double> rhs(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) rhs[i] = -r[i];
    const auto delta = solve_linear(system, rhs);

    // Backtracking on the Euclidean residual norm; the full step is kept if no damped step
    // gives sufficient decrease.
    const double merit = norm2(r);
    std::vector<double> r_trial;
    bool accepted = false;
    for (double lambda = 1.0; lambda >= kMinNewtonDamping; lambda *= 0.5) {
      for (std::size_t i = 0; i < n; ++i) {
        trial_alpha[i] = alpha[i] + lambda * delta[i];
        trial_beta[i] = beta[i] + lambda * delta[n + i];
      }
      if (!all_finite(trial_alpha) || !all_finite(trial_beta)) continue;
      r_trial = residual_for(implicit_weight, next, ops, previous_mass_alpha, trial_alpha, trial_beta);
      if (norm2(r_trial) <= (1.0 - 1e-4 * lambda) * merit) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      for (std::size_t i = 0; i < n; ++i) {
        trial_alpha[i] = alpha[i] + delta[i];
        trial_beta[i] = beta[i] + delta[n + i];
      }
      if (!all_finite(trial_alpha) || !all_finite(trial_beta)) return "non-finite Newton iterate";
      r_trial = residual_for(implicit_weight, next, ops, previous_mass_alpha, trial_alpha, trial_beta);
    }
    alpha.swap(trial_alpha);
    beta.swap(trial_beta);
    r = std::move(r_trial);
  }
}

namespace {

StepResult single_step(SchemeKind kind, const SurfaceMesh& mesh_prev,
                       const SurfaceMesh& mesh_next, const PhaseState& state,
                       SchemeConfig config, const Potential& potential) {
  config.scheme = kind;
  if (mesh_prev.node_count() != mesh_next.node_count() ||
      mesh_prev.triangle_count() != mesh_next.triangle_count()) {
    fail(ErrorCode::LengthMismatch, "meshes of consecutive time levels differ in connectivity");
  }
  const auto prev_mass = assemble_mass(mesh_prev);
  const auto prev_mass_alpha = prev_mass * state.alpha;
  const auto ops = assemble_operators(mesh_next);
  CahnHilliardStepper stepper(config, potential);
  return stepper.step(mesh_next, ops, prev_mass_alpha, state);
}

}  // namespace

StepResult step_fully_implicit(const SurfaceMesh& mesh_prev, const SurfaceMesh& mesh_next,
                               const PhaseState& state, const SchemeConfig& config,
                               const Potential& potential) {
  return single_step(SchemeKind::FullyImplicit, mesh_prev, mesh_next, state, config, potential);
}

StepResult step_imex(const SurfaceMesh& mesh_prev, const SurfaceMesh& mesh_next,
                     const PhaseState& state, const SchemeConfig& config,
                     const Potential& potential) {
  return single_step(SchemeKind::Imex, mesh_prev, mesh_next, state, config, potential);
}

std::vector<double> chemical_potential(const SurfaceMesh& mesh, const AssembledOperators& ops,
                                       std::span<const double> alpha, double epsilon,
                                       const Potential& potential) {
  const auto load = assemble_nonlinear_load(mesh, alpha, potential);
  const auto a_alpha = ops.stiffness * alpha;
  const auto m_alpha = ops.mass * alpha;
  std::vector<double> rhs(alpha.size());
  for (std::size_t i = 0; i < rhs.size(); ++i) {
    rhs[i] = epsilon * a_alpha[i] + (load[i] - potential.theta * m_alpha[i]) / epsilon;
  }
  return solve_sparse(ops.mass, rhs);
}

}  // namespace escher
