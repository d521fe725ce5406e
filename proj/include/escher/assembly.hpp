#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "escher/mesh.hpp"
#include "escher/potential.hpp"
#include "escher/quadrature.hpp"
#include "escher/sparse.hpp"

namespace escher {

using ElementMatrix = std::array<std::array<double, 3>, 3>;

/// |K| / 12 * [[2,1,1],[1,2,1],[1,1,2]]. Throws DegenerateTriangle.
ElementMatrix element_mass_matrix(const Vec3& a, const Vec3& b, const Vec3& c);
/// |K| grad(phi_i) . grad(phi_j) with gradients taken in the triangle plane.
ElementMatrix element_stiffness_matrix(const Vec3& a, const Vec3& b, const Vec3& c);

/// All N x N operators on one mesh share the vertex-adjacency pattern (diagonal included).
SparseMatrix assemble_mass(const SurfaceMesh& mesh);
SparseMatrix assemble_stiffness(const SurfaceMesh& mesh);

/// F_j = int F1'(U_h) phi_j, with U_h = sum_i alpha_i phi_i.
std::vector<double> assemble_nonlinear_load(const SurfaceMesh& mesh, std::span<const double> alpha,
                                            const Potential& potential,
                                            const QuadratureRule& rule = quadrature_rule(4));

/// J_ij = int F1''(U_h) phi_i phi_j, the derivative of assemble_nonlinear_load.
SparseMatrix assemble_nonlinear_jacobian(const SurfaceMesh& mesh, std::span<const double> alpha,
                                         const Potential& potential,
                                         const QuadratureRule& rule = quadrature_rule(4));

/// int F(U_h) for the full (non-convex) potential.
double integrate_potential(const SurfaceMesh& mesh, std::span<const double> alpha,
                           const Potential& potential,
                           const QuadratureRule& rule = quadrature_rule(4));

struct AssembledOperators {
  SparseMatrix mass;
  SparseMatrix stiffness;
  std::size_t node_count = 0;
  double time = 0.0;
};

AssembledOperators assemble_operators(const SurfaceMesh& mesh);

/// Worker threads used by element loops: hardware concurrency, capped by ESCHER_THREADS.
int assembly_threads();

}  // namespace escher
