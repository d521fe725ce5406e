#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "escher/assembly.hpp"
#include "escher/linear_solvers.hpp"
#include "escher/mesh.hpp"
#include "escher/potential.hpp"

namespace escher {

enum class SchemeKind { FullyImplicit, Imex };

std::string_view to_string(SchemeKind kind);
std::optional<SchemeKind> scheme_kind_from_string(std::string_view name);

struct SchemeConfig {
  double epsilon = 0.05;
  double tau = 1e-4;
  double final_time = 0.0;
  SchemeKind scheme = SchemeKind::FullyImplicit;
  double newton_tol = 1e-11;
  int newton_max_iter = 25;
  LinearSolverKind linear_solver = LinearSolverKind::SparseLu;
  /// Above this many nodes the Newton systems switch to BiCGStab.
  std::size_t iterative_threshold = 50000;
  /// Emit a snapshot every this many steps; 0 disables snapshots.
  int snapshot_every = 0;

  /// N_T = round(T / tau). Throws ValidationError("tau") if tau does not divide T.
  int step_count() const;
  /// Throws ValidationError naming the offending field.
  void validate() const;
  /// Non-fatal problems, e.g. tau above the uniqueness bound of the fully implicit scheme.
  std::vector<std::string> warnings(const Potential& potential) const;
};

/// Nodal coefficients of the order parameter (alpha) and chemical potential (beta).
struct PhaseState {
  std::vector<double> alpha;
  std::vector<double> beta;
  double time = 0.0;
  int step = 0;
};

struct NewtonReport {
  int iterations = 0;
  std::vector<double> residual_history;  // infinity norms, one per evaluated iterate
};

struct StepResult {
  PhaseState state;
  NewtonReport newton;
};

/// Newton solver for one time level of either scheme. Keeps the LU symbolic analysis
/// between steps, since the sparsity pattern is fixed by the mesh connectivity.
class CahnHilliardStepper {
 public:
  CahnHilliardStepper(SchemeConfig config, Potential potential);

  /// Advances `state` (living on the mesh behind `previous_mass`) to `next`.
  /// `previous_mass_alpha` is M^{n-1} alpha^{n-1}. The Newton iteration starts from `guess`,
  /// or from the previous state by nodal identification. Without a guess, a failed fully
  /// implicit solve is retried by continuation from the IMEX problem. Throws NewtonDivergence.
  StepResult step(const SurfaceMesh& next, const AssembledOperators& next_ops,
                  std::span<const double> previous_mass_alpha, const PhaseState& state,
                  const PhaseState* guess = nullptr);

  const SchemeConfig& config() const { return config_; }
  const Potential& potential() const { return potential_; }

  /// Residual of the block system at (alpha, beta), as [first block; second block].
  std::vector<double> residual(const SurfaceMesh& next, const AssembledOperators& next_ops,
                               std::span<const double> previous_mass_alpha,
                               std::span<const double> alpha, std::span<const double> beta) const;

 private:
  // implicit_weight 1 is the fully implicit residual, 0 the IMEX one.
  std::vector<double> residual_for(double implicit_weight, const SurfaceMesh& next,
                                   const AssembledOperators& next_ops,
                                   std::span<const double> previous_mass_alpha,
                                   std::span<const double> alpha,
                                   std::span<const double> beta) const;
  // Damped Newton in place; returns an empty string on convergence, else the reason.
  std::string newton(const SurfaceMesh& next, const AssembledOperators& next_ops,
                     std::span<const double> previous_mass_alpha, double implicit_weight,
                     std::vector<double>& alpha, std::vector<double>& beta,
                     NewtonReport& report);
  std::vector<double> solve_linear(const SparseMatrix& jacobian, std::span<const double> rhs);

  SchemeConfig config_;
  Potential potential_;
  SparseLu lu_;
};

/// One step of the fully implicit scheme:
///   [[M, tau A], [-eps A + (theta/eps) M, M]] (alpha; beta) - (1/eps)(0; F(alpha))
///     = (M_prev alpha_prev; 0)
StepResult step_fully_implicit(const SurfaceMesh& mesh_prev, const SurfaceMesh& mesh_next,
                               const PhaseState& state, const SchemeConfig& config,
                               const Potential& potential);

/// One step of the implicit-explicit scheme, concave part taken at the old level:
///   [[M, tau A], [-eps A, M]] (alpha; beta) - (1/eps)(0; F(alpha))
///     = (M_prev alpha_prev; -(theta/eps) M_prev alpha_prev)
StepResult step_imex(const SurfaceMesh& mesh_prev, const SurfaceMesh& mesh_next,
                     const PhaseState& state, const SchemeConfig& config,
                     const Potential& potential);

/// Discrete chemical potential of alpha on `mesh`: M beta = eps A alpha + (1/eps) m(F'(U), .).
std::vector<double> chemical_potential(const SurfaceMesh& mesh, const AssembledOperators& ops,
                                       std::span<const double> alpha, double epsilon,
                                       const Potential& potential);

}  // namespace escher
