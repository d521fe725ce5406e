#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "escher/assembly.hpp"
#include "escher/mesh.hpp"
#include "escher/potential.hpp"

namespace escher {

/// Per-step scalars of a trajectory.
struct DiagnosticRecord {
  int step = 0;
  double time = 0.0;
  double energy = 0.0;
  double mass = 0.0;
  double area = 0.0;
  double h = 0.0;
  int newton_iterations = 0;
  std::optional<double> hminus1_norm;  // of the mean-free part of U_h
};

/// Ginzburg-Landau energy (eps/2) alpha^T A alpha + (1/eps) int F(U_h).
double ginzburg_landau_energy(const SurfaceMesh& mesh, std::span<const double> alpha,
                              const Potential& potential, double epsilon);
double ginzburg_landau_energy(const SurfaceMesh& mesh, const AssembledOperators& ops,
                              std::span<const double> alpha, const Potential& potential,
                              double epsilon);

/// 1^T M alpha.
double discrete_mass(const SurfaceMesh& mesh, std::span<const double> alpha);
double discrete_mass(const AssembledOperators& ops, std::span<const double> alpha);

/// Discrete inverse Laplacian: A x = M z with 1^T M x = 0. Throws IncompatibleRHS unless
/// 1^T M z = 0.
std::vector<double> inverse_laplacian(const AssembledOperators& ops, std::span<const double> z);

/// sqrt(x^T A x) with x the discrete inverse Laplacian of z.
double hminus1_norm(const SurfaceMesh& mesh, std::span<const double> z);
double hminus1_norm(const AssembledOperators& ops, std::span<const double> z);

/// z minus its M-weighted mean.
std::vector<double> remove_mean(const AssembledOperators& ops, std::span<const double> z);

/// sqrt(d^T M d) and sqrt(d^T A d) with d = a - b, both on the given mesh.
double l2_error(const SurfaceMesh& mesh, std::span<const double> a, std::span<const double> b);
double h1_semi_error(const SurfaceMesh& mesh, std::span<const double> a,
                     std::span<const double> b);
double l2_error(const AssembledOperators& ops, std::span<const double> a,
                std::span<const double> b);
double h1_semi_error(const AssembledOperators& ops, std::span<const double> a,
                     std::span<const double> b);

enum class NormKind { L2, H1Semi };
std::string_view to_string(NormKind kind);

struct EocRow {
  double h = 0.0;
  double error = 0.0;
  std::optional<double> eoc;  // undefined for the first row
};

struct EocTable {
  NormKind norm = NormKind::L2;
  std::string variable = "u";
  std::vector<EocRow> rows;
};

/// eoc_k = log(e_{k-1} / e_k) / log(h_{k-1} / h_k). Throws ZeroError for an exactly zero error
/// and InvalidArgument unless the h are strictly decreasing.
EocTable eoc(std::span<const double> errors, std::span<const double> hs,
             NormKind norm = NormKind::L2, std::string variable = "u");

}  // namespace escher
