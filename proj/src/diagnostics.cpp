#include "escher/diagnostics.hpp"

#include <cmath>
#include <string>

#include "escher/error.hpp"
#include "escher/linear_solvers.hpp"

namespace escher {

namespace {

std::vector<double> difference(std::span<const double> a, std::span<const double> b,
                               std::size_t expected) {
  if (a.size() != b.size() || a.size() != expected) {
    fail(ErrorCode::LengthMismatch, "nodal vectors do not match the mesh");
  }
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = a[i] - b[i];
  return d;
}

double quadratic_form(const SparseMatrix& m, std::span<const double> x) {
  return dot(x, m * x);
}

}  // namespace

double ginzburg_landau_energy(const SurfaceMesh& mesh, const AssembledOperators& ops,
                              std::span<const double> alpha, const Potential& potential,
                              double epsilon) {
  if (alpha.size() != mesh.node_count()) {
    fail(ErrorCode::LengthMismatch, "coefficient vector does not match node count");
  }
  return 0.5 * epsilon * quadratic_form(ops.stiffness, alpha) +
         integrate_potential(mesh, alpha, potential) / epsilon;
}

double ginzburg_landau_energy(const SurfaceMesh& mesh, std::span<const double> alpha,
                              const Potential& potential, double epsilon) {
  return ginzburg_landau_energy(mesh, assemble_operators(mesh), alpha, potential, epsilon);
}

double discrete_mass(const AssembledOperators& ops, std::span<const double> alpha) {
  if (alpha.size() != ops.node_count) {
    fail(ErrorCode::LengthMismatch, "coefficient vector does not match node count");
  }
  return sum(ops.mass * alpha);
}

double discrete_mass(const SurfaceMesh& mesh, std::span<const double> alpha) {
  return discrete_mass(AssembledOperators{assemble_mass(mesh), {}, mesh.node_count(), mesh.time()},
                       alpha);
}

std::vector<double> inverse_laplacian(const AssembledOperators& ops, std::span<const double> z) {
  if (z.size() != ops.node_count) {
    fail(ErrorCode::LengthMismatch, "coefficient vector does not match node count");
  }
  return solve_mean_zero_spd(ops.stiffness, ops.mass * z, ops.mass);
}

double hminus1_norm(const AssembledOperators& ops, std::span<const double> z) {
  const auto x = inverse_laplacian(ops, z);
  return std::sqrt(std::max(0.0, quadratic_form(ops.stiffness, x)));
}

double hminus1_norm(const SurfaceMesh& mesh, std::span<const double> z) {
  return hminus1_norm(assemble_operators(mesh), z);
}

std::vector<double> remove_mean(const AssembledOperators& ops, std::span<const double> z) {
  const std::vector<double> ones(ops.node_count, 1.0);
  const auto m1 = ops.mass * ones;
  const double mean = dot(m1, z) / sum(m1);
  std::vector<double> out(z.begin(), z.end());
  for (auto& v : out) v -= mean;
  return out;
}

double l2_error(const AssembledOperators& ops, std::span<const double> a,
                std::span<const double> b) {
  const auto d = difference(a, b, ops.node_count);
  return std::sqrt(std::max(0.0, quadratic_form(ops.mass, d)));
}

double h1_semi_error(const AssembledOperators& ops, std::span<const double> a,
                     std::span<const double> b) {
  const auto d = difference(a, b, ops.node_count);
  return std::sqrt(std::max(0.0, quadratic_form(ops.stiffness, d)));
}

double l2_error(const SurfaceMesh& mesh, std::span<const double> a, std::span<const double> b) {
  return l2_error(assemble_operators(mesh), a, b);
}

double h1_semi_error(const SurfaceMesh& mesh, std::span<const double> a,
                     std::span<const double> b) {
  return h1_semi_error(assemble_operators(mesh), a, b);
}

std::string_view to_string(NormKind kind) { return kind == NormKind::L2 ? "L2" : "H1-semi"; }

EocTable eoc(std::span<const double> errors, std::span<const double> hs, NormKind norm,
             std::string variable) {
  if (errors.size() != hs.size()) fail(ErrorCode::LengthMismatch, "errors and h differ in length");
  if (errors.size() < 2) fail(ErrorCode::InvalidArgument, "EOC needs at least two levels");
  EocTable table{norm, std::move(variable), {}};
  for (std::size_t k = 0; k < errors.size(); ++k) {
    if (errors[k] == 0.0) {
      fail(ErrorCode::ZeroError, "error of level " + std::to_string(k) + " is exactly zero");
    }
    EocRow row{hs[k], errors[k], std::nullopt};
    if (k > 0) {
      if (!(hs[k] < hs[k - 1])) fail(ErrorCode::InvalidArgument, "h must strictly decrease");
      row.eoc = std::log(errors[k - 1] / errors[k]) / std::log(hs[k - 1] / hs[k]);
    }
    table.rows.push_back(row);
  }
  return table;
}

}  // namespace escher
