#pragma once

#include <memory>
#include <span>
#include <vector>

#include "escher/sparse.hpp"

namespace escher {

enum class LinearSolverKind { SparseLu, BiCgStab };

struct LinearSolverOptions {
  LinearSolverKind kind = LinearSolverKind::SparseLu;
  double relative_tolerance = 1e-12;  // BiCGStab only
  int max_iterations = 0;             // BiCGStab only; 0 means 10 * n
};

/// Sparse LU with partial pivoting. The symbolic analysis is kept and reused as long as
/// subsequent matrices have the same sparsity pattern.
class SparseLu {
 public:
  SparseLu();
  ~SparseLu();
  SparseLu(SparseLu&&) noexcept;
  SparseLu& operator=(SparseLu&&) noexcept;

  /// Throws SingularMatrix.
  void factorize(const SparseMatrix& a);
  std::vector<double> solve(std::span<const double> b) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Right-preconditioned BiCGStab with a Jacobi preconditioner.
/// Throws IterativeBreakdown on breakdown or when the iteration cap is reached.
std::vector<double> bicgstab(const SparseMatrix& a, std::span<const double> b,
                             double relative_tolerance, int max_iterations);

/// Solves Ax = b. Throws SingularMatrix (LU) or IterativeBreakdown (BiCGStab).
std::vector<double> solve_sparse(const SparseMatrix& a, std::span<const double> b,
                                 const LinearSolverOptions& options = {});

/// Solves Ax = b for A symmetric positive semidefinite with kernel spanned by the constants
/// (a stiffness matrix on a closed connected mesh), normalised by 1^T M x = 0.
/// Requires 1^T b = 0 within 1e-10 |b|; throws IncompatibleRHS otherwise.
std::vector<double> solve_mean_zero_spd(const SparseMatrix& a, std::span<const double> b,
                                        const SparseMatrix& mass,
                                        double relative_tolerance = 1e-13);

}  // namespace escher
