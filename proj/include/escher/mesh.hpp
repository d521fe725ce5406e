#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "escher/surface.hpp"
#include "escher/vec3.hpp"

namespace escher {

using Triangle = std::array<int, 3>;

/// Triangulated approximation Gamma_h(t) of a level-set surface. Connectivity is fixed for the
/// lifetime of a mesh family; only node positions change in time. The constructor does not
/// validate; see check_admissible() and max_level_set_residual().
class SurfaceMesh {
 public:
  SurfaceMesh(std::vector<Vec3> nodes, std::vector<Triangle> triangles, LevelSetSurface surface,
              double time, int level = 0);

  const std::vector<Vec3>& nodes() const { return nodes_; }
  const std::vector<Triangle>& triangles() const { return triangles_; }
  const LevelSetSurface& surface() const { return surface_; }
  double time() const { return time_; }
  int level() const { return level_; }

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t triangle_count() const { return triangles_.size(); }

  std::array<Vec3, 3> corners(std::size_t k) const {
    const auto& t = triangles_[k];
    return {nodes_[t[0]], nodes_[t[1]], nodes_[t[2]]};
  }

 private:
  std::vector<Vec3> nodes_;
  std::vector<Triangle> triangles_;
  LevelSetSurface surface_;
  double time_;
  int level_;
};

/// Where a fine node comes from: barycentric combination of up to three coarse vertices.
struct ParentRecord {
  std::array<int, 3> vertices{};
  std::array<double, 3> weights{};
  int count = 0;
};

struct RefinedMesh {
  SurfaceMesh mesh;
  std::vector<ParentRecord> parents;  // one per fine node
};

/// Icosahedron refined `subdivisions` times, nodes projected onto Gamma(t0).
/// Node count 10*4^s + 2, triangle count 20*4^s. Throws WrongSurfaceKind for tori.
SurfaceMesh build_icosphere(const LevelSetSurface& surface, int subdivisions, double t0);

/// Structured (major angle x minor angle) grid with each quad split into two triangles.
/// Throws WrongSurfaceKind for spheres.
SurfaceMesh build_torus_mesh(const LevelSetSurface& surface, int n_major, int n_minor, double t0);

/// Red refinement: every triangle split into four at its edge midpoints, which are projected
/// onto the surface. Coarse nodes keep their indices; new nodes follow in first-seen edge order.
RefinedMesh refine_with_parents(const SurfaceMesh& mesh);
SurfaceMesh refine(const SurfaceMesh& mesh);

/// Moves every node with the exact surface motion. Throws InvalidArgument if t1 < mesh.time().
SurfaceMesh advance_mesh(const SurfaceMesh& mesh, double t1);

/// Longest edge over all triangles.
double mesh_size_h(const SurfaceMesh& mesh);

double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c);
double surface_area(const SurfaceMesh& mesh);
double min_inradius(const SurfaceMesh& mesh);
double max_level_set_residual(const SurfaceMesh& mesh);

/// Every undirected edge has exactly two incident triangles and the two use it in opposite
/// directions, and no triangle is degenerate.
bool is_admissible(const SurfaceMesh& mesh);
void check_admissible(const SurfaceMesh& mesh);

/// Nested family of meshes obtained by repeated refinement of a coarse mesh.
class MeshHierarchy {
 public:
  explicit MeshHierarchy(SurfaceMesh coarse);
  MeshHierarchy(SurfaceMesh coarse, int extra_levels);

  void add_level();

  std::size_t level_count() const { return levels_.size(); }
  const SurfaceMesh& level(std::size_t i) const { return levels_.at(i); }
  const SurfaceMesh& finest() const { return levels_.back(); }

  /// Parent records of the nodes of `fine_level` (>= 1) in terms of level fine_level - 1.
  const std::vector<ParentRecord>& parents(std::size_t fine_level) const;

  /// Nodal values on coarse_level -> nodal values on coarse_level + 1 (P1 interpolation).
  std::vector<double> prolong(std::size_t coarse_level, std::span<const double> values) const;
  /// Repeated prolongation from `from` up to `to` (to >= from).
  std::vector<double> prolong_to(std::size_t from, std::size_t to,
                                 std::span<const double> values) const;

 private:
  std::vector<SurfaceMesh> levels_;
  std::vector<std::vector<ParentRecord>> parents_;  // parents_[i] belongs to levels_[i + 1]
};

}  // namespace escher
