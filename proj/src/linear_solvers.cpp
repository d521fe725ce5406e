#include "escher/linear_solvers.hpp"

#include <Eigen/SparseCore>
#ifdef ESCHER_HAVE_UMFPACK
#include <Eigen/UmfPackSupport>
#else
#include <Eigen/SparseLU>
#endif
#include <cmath>
#include <string>

#include "escher/error.hpp"

namespace escher {

namespace {

using EigenCsr = Eigen::SparseMatrix<double, Eigen::RowMajor, int>;
using EigenCsc = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;

EigenCsc to_eigen(const SparseMatrix& a) {
  const Eigen::Map<const EigenCsr> view(a.rows(), a.cols(), static_cast<int>(a.nnz()),
                                        a.row_offsets().data(), a.column_indices().data(),
                                        a.values().data());
  return EigenCsc(view);
}

std::vector<double> jacobi_inverse(const SparseMatrix& a) {
  std::vector<double> d(static_cast<std::size_t>(a.rows()), 1.0);
  for (int i = 0; i < a.rows(); ++i) {
    const double v = a.at(i, i);
    if (v != 0.0 && std::isfinite(v)) d[i] = 1.0 / v;
  }
  return d;
}

}  // namespace

struct SparseLu::Impl {
#ifdef ESCHER_HAVE_UMFPACK
  Eigen::UmfPackLU<EigenCsc> lu;
#else
  Eigen::SparseLU<EigenCsc, Eigen::COLAMDOrdering<int>> lu;
#endif
  EigenCsc matrix;  // must outlive lu: the UMFPACK wrapper solves against it
  SparseMatrix pattern;  // values unused; only for pattern comparison
  bool analysed = false;
};

SparseLu::SparseLu() : impl_(std::make_unique<Impl>()) {}
SparseLu::~SparseLu() = default;
SparseLu::SparseLu(SparseLu&&) noexcept = default;
SparseLu& SparseLu::operator=(SparseLu&&) noexcept = default;

void SparseLu::factorize(const SparseMatrix& a) {
  if (a.rows() != a.cols()) fail(ErrorCode::InvalidArgument, "LU needs a square matrix");
  impl_->matrix = to_eigen(a);
  const EigenCsc& m = impl_->matrix;
  if (!impl_->analysed || !impl_->pattern.same_pattern(a)) {
    impl_->lu.analyzePattern(m);
    impl_->pattern = a;
    impl_->analysed = true;
  }
  impl_->lu.factorize(m);
  if (impl_->lu.info() != Eigen::Success) {
    fail(ErrorCode::SingularMatrix, "sparse LU factorization failed");
  }
}

std::vector<double> SparseLu::solve(std::span<const double> b) const {
  if (!impl_->analysed) fail(ErrorCode::InvalidArgument, "solve before factorize");
  const Eigen::Map<const Eigen::VectorXd> rhs(b.data(), static_cast<Eigen::Index>(b.size()));
  const Eigen::VectorXd x = impl_->lu.solve(rhs);
  if (impl_->lu.info() != Eigen::Success || !x.allFinite()) {
    fail(ErrorCode::SingularMatrix, "sparse LU solve failed");
  }
  return {x.data(), x.data() + x.size()};
}

std::vector<double> bicgstab(const SparseMatrix& a, std::span<const double> b,
                             double relative_tolerance, int max_iterations) {
  const std::size_t n = b.size();
  if (a.rows() != a.cols() || static_cast<std::size_t>(a.rows()) != n) {
    fail(ErrorCode::LengthMismatch, "BiCGStab size mismatch");
  }
  if (max_iterations <= 0) max_iterations = 10 * static_cast<int>(n) + 10;
  const auto dinv = jacobi_inverse(a);
  const double bnorm = norm2(b);
  std::vector<double> x(n, 0.0);
  if (bnorm == 0.0) return x;

  std::vector<double> r(b.begin(), b.end()), r0 = r, p(n, 0.0), v(n, 0.0), s(n), t(n), ph(n),
      sh(n);
  double rho = 1.0, alpha = 1.0, omega = 1.0;
  const double target = relative_tolerance * bnorm;
  for (int it = 0; it < max_iterations; ++it) {
    const double rho_new = dot(r0, r);
    if (std::abs(rho_new) < 1e-300 || omega == 0.0) {
      fail(ErrorCode::IterativeBreakdown, "BiCGStab breakdown at iteration " + std::to_string(it));
    }
    const double beta = (rho_new / rho) * (alpha / omega);
    rho = rho_new;
    for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * (p[i] - omega * v[i]);
    for (std::size_t i = 0; i < n; ++i) ph[i] = dinv[i] * p[i];
    a.multiply(ph, v);
    const double r0v = dot(r0, v);
    if (r0v == 0.0) fail(ErrorCode::IterativeBreakdown, "BiCGStab breakdown (r0.v = 0)");
    alpha = rho / r0v;
    for (std::size_t i = 0; i < n; ++i) s[i] = r[i] - alpha * v[i];
    if (norm2(s) <= target) {
      for (std::size_t i = 0; i < n; ++i) x[i] += alpha * ph[i];
      return x;
    }
    for (std::size_t i = 0; i < n; ++i) sh[i] = dinv[i] * s[i];
    a.multiply(sh, t);
    const double tt = dot(t, t);
    omega = tt > 0.0 ? dot(t, s) / tt : 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += alpha * ph[i] + omega * sh[i];
      r[i] = s[i] - omega * t[i];
    }
    if (norm2(r) <= target) return x;
  }
  fail(ErrorCode::IterativeBreakdown,
       "BiCGStab did not converge in " + std::to_string(max_iterations) + " iterations");
}

std::vector<double> solve_sparse(const SparseMatrix& a, std::span<const double> b,
                                 const LinearSolverOptions& options) {
  if (a.rows() != a.cols() || static_cast<std::size_t>(a.rows()) != b.size()) {
    fail(ErrorCode::LengthMismatch, "linear system size mismatch");
  }
  if (options.kind == LinearSolverKind::BiCgStab) {
    return bicgstab(a, b, options.relative_tolerance, options.max_iterations);
  }
  SparseLu lu;
  lu.factorize(a);
  auto x = lu.solve(b);
  // one step of iterative refinement
  auto r = a * x;
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = b[i] - r[i];
  const auto dx = lu.solve(r);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] += dx[i];
  return x;
}

std::vector<double> solve_mean_zero_spd(const SparseMatrix& a, std::span<const double> b,
                                        const SparseMatrix& mass, double relative_tolerance) {
  const std::size_t n = b.size();
  if (a.rows() != a.cols() || static_cast<std::size_t>(a.rows()) != n ||
      !(mass.rows() == a.rows() && mass.cols() == a.cols())) {
    fail(ErrorCode::LengthMismatch, "mean-zero solve size mismatch");
  }
  const double bnorm = norm2(b);
  const double bsum = sum(b);
  if (std::abs(bsum) > 1e-10 * bnorm) {
    fail(ErrorCode::IncompatibleRhs,
         "right-hand side has nonzero total " + std::to_string(bsum));
  }
  std::vector<double> x(n, 0.0);
  if (bnorm == 0.0) return x;

  // CG restricted to the complement of the constants (the range of A).
  const double mean_b = bsum / static_cast<double>(n);
  std::vector<double> r(n);
  for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - mean_b;
  const auto dinv = jacobi_inverse(a);
  auto precondition = [&](std::span<const double> in, std::span<double> out) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) m += in[i];
    m /= static_cast<double>(n);
    double m2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      out[i] = dinv[i] * (in[i] - m);
      m2 += out[i];
    }
    m2 /= static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) out[i] -= m2;
  };
  std::vector<double> z(n), p(n), q(n);
  precondition(r, z);
  p = z;
  double rz = dot(r, z);
  const double target = relative_tolerance * bnorm;
  const int max_iterations = 10 * static_cast<int>(n) + 100;
  bool converged = false;
  for (int it = 0; it < max_iterations; ++it) {
    a.multiply(p, q);
    const double pq = dot(p, q);
    if (!(pq > 0.0)) fail(ErrorCode::IterativeBreakdown, "CG lost positivity");
    const double alpha = rz / pq;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * q[i];
    }
    if (norm2(r) <= target) {
      converged = true;
      break;
    }
    precondition(r, z);
    const double rz_new = dot(r, z);
    const double beta = rz_new / rz;
    rz = rz_new;
    for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  if (!converged) fail(ErrorCode::IterativeBreakdown, "CG did not converge");

  // shift to the M-weighted mean-zero representative
  const std::vector<double> ones(n, 1.0);
  const auto m1 = mass * ones;
  const double shift = dot(m1, x) / sum(m1);
  for (auto& v : x) v -= shift;
  return x;
}

}  // namespace escher
