#include "escher/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <string>
#include <utility>

#include "escher/error.hpp"

namespace escher {

namespace {

constexpr double kMinTriangleArea = 1e-14;

using Edge = std::pair<int, int>;

Edge undirected(int a, int b) { return a < b ? Edge{a, b} : Edge{b, a}; }

/// Flips every triangle if the first one is oriented against the outward level-set normal.
void orient_outward(std::vector<Triangle>& triangles, const std::vector<Vec3>& nodes,
                    const LevelSetSurface& surface, double t) {
  const auto& tri = triangles.front();
  const Vec3 a = nodes[tri[0]], b = nodes[tri[1]], c = nodes[tri[2]];
  const Vec3 n = cross(b - a, c - a);
  const Vec3 centroid = (a + b + c) / 3.0;
  if (dot(n, surface.level_set_gradient(centroid, t)) < 0.0) {
    for (auto& tr : triangles) std::swap(tr[1], tr[2]);
  }
}

}  // namespace

SurfaceMesh::SurfaceMesh(std::vector<Vec3> nodes, std::vector<Triangle> triangles,
                         LevelSetSurface surface, double time, int level)
    : nodes_(std::move(nodes)),
      triangles_(std::move(triangles)),
      surface_(surface),
      time_(time),
      level_(level) {}

SurfaceMesh build_icosphere(const LevelSetSurface& surface, int subdivisions, double t0) {
  if (!surface.is_sphere()) {
    fail(ErrorCode::WrongSurfaceKind, "icosphere requires a sphere, got " +
                                          std::string(to_string(surface.kind())));
  }
  if (subdivisions < 0) fail(ErrorCode::InvalidArgument, "negative subdivision count");

  const double phi = std::numbers::phi;
  std::vector<Vec3> nodes = {
      {-1, phi, 0}, {1, phi, 0}, {-1, -phi, 0}, {1, -phi, 0},
      {0, -1, phi}, {0, 1, phi}, {0, -1, -phi}, {0, 1, -phi},
      {phi, 0, -1}, {phi, 0, 1}, {-phi, 0, -1}, {-phi, 0, 1},
  };
  std::vector<Triangle> triangles = {
      {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
      {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
      {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
      {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1},
  };
  const double radius = surface.sphere_radius(t0);
  for (auto& p : nodes) p = surface.project_to_surface(p * (radius / norm(p)), t0);
  orient_outward(triangles, nodes, surface, t0);

  SurfaceMesh mesh(std::move(nodes), std::move(triangles), surface, t0, 0);
  for (int s = 0; s < subdivisions; ++s) mesh = refine(mesh);
  return mesh;
}

SurfaceMesh build_torus_mesh(const LevelSetSurface& surface, int n_major, int n_minor, double t0) {
  if (!surface.is_torus()) {
    fail(ErrorCode::WrongSurfaceKind, "torus mesh requires a torus, got " +
                                          std::string(to_string(surface.kind())));
  }
  if (n_major < 3 || n_minor < 3) {
    fail(ErrorCode::InvalidArgument, "torus grid needs at least 3 x 3 cells");
  }
  const double big_r = surface.torus_major_radius(t0);
  const double small_r = surface.torus_minor_radius(t0);
  const double two_pi = 2.0 * std::numbers::pi;

  std::vector<Vec3> nodes;
  nodes.reserve(static_cast<std::size_t>(n_major) * n_minor);
  for (int i = 0; i < n_major; ++i) {
    const double theta = two_pi * i / n_major;
    for (int j = 0; j < n_minor; ++j) {
      const double psi = two_pi * j / n_minor;
      const double rho = big_r + small_r * std::cos(psi);
      const Vec3 p{rho * std::cos(theta), rho * std::sin(theta), small_r * std::sin(psi)};
      nodes.push_back(surface.project_to_surface(p, t0));
    }
  }

  auto id = [n_major, n_minor](int i, int j) {
    return ((i + n_major) % n_major) * n_minor + (j + n_minor) % n_minor;
  };
  std::vector<Triangle> triangles;
  triangles.reserve(2 * nodes.size());
  for (int i = 0; i < n_major; ++i) {
    for (int j = 0; j < n_minor; ++j) {
      const int a = id(i, j), b = id(i + 1, j), c = id(i + 1, j + 1), d = id(i, j + 1);
      triangles.push_back({a, b, c});
      triangles.push_back({a, c, d});
    }
  }
  orient_outward(triangles, nodes, surface, t0);
  return SurfaceMesh(std::move(nodes), std::move(triangles), surface, t0, 0);
}

RefinedMesh refine_with_parents(const SurfaceMesh& mesh) {
  const auto& surface = mesh.surface();
  const double t = mesh.time();

  std::vector<Vec3> nodes = mesh.nodes();
  std::vector<ParentRecord> parents(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    parents[i] = {{static_cast<int>(i), 0, 0}, {1.0, 0.0, 0.0}, 1};
  }

  std::map<Edge, int> midpoint_of;
  auto midpoint = [&](int a, int b) {
    const Edge e = undirected(a, b);
    auto [it, inserted] = midpoint_of.try_emplace(e, static_cast<int>(nodes.size()));
    if (inserted) {
      const Vec3 m = 0.5 * (nodes[e.first] + nodes[e.second]);
      nodes.push_back(surface.project_to_surface(m, t));
      parents.push_back({{e.first, e.second, 0}, {0.5, 0.5, 0.0}, 2});
    }
    return it->second;
  };

  std::vector<Triangle> triangles;
  triangles.reserve(4 * mesh.triangle_count());
  for (const auto& [a, b, c] : mesh.triangles()) {
    const int ab = midpoint(a, b);
    const int bc = midpoint(b, c);
    const int ca = midpoint(c, a);
    triangles.push_back({a, ab, ca});
    triangles.push_back({ab, b, bc});
    triangles.push_back({ca, bc, c});
    triangles.push_back({ab, bc, ca});
  }
  return {SurfaceMesh(std::move(nodes), std::move(triangles), surface, t, mesh.level() + 1),
          std::move(parents)};
}

SurfaceMesh refine(const SurfaceMesh& mesh) { return refine_with_parents(mesh).mesh; }

SurfaceMesh advance_mesh(const SurfaceMesh& mesh, double t1) {
  if (t1 < mesh.time()) {
    fail(ErrorCode::InvalidArgument, "cannot advance mesh backwards in time");
  }
  if (t1 == mesh.time()) return mesh;
  std::vector<Vec3> nodes;
  nodes.reserve(mesh.node_count());
  for (const auto& p : mesh.nodes()) nodes.push_back(mesh.surface().move_node(p, mesh.time(), t1));
  return SurfaceMesh(std::move(nodes), mesh.triangles(), mesh.surface(), t1, mesh.level());
}

double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c) {
  return 0.5 * norm(cross(b - a, c - a));
}

double mesh_size_h(const SurfaceMesh& mesh) {
  double h = 0.0;
  for (std::size_t k = 0; k < mesh.triangle_count(); ++k) {
    const auto [a, b, c] = mesh.corners(k);
    h = std::max({h, norm(b - a), norm(c - b), norm(a - c)});
  }
  return h;
}

double surface_area(const SurfaceMesh& mesh) {
  double area = 0.0;
  for (std::size_t k = 0; k < mesh.triangle_count(); ++k) {
    const auto [a, b, c] = mesh.corners(k);
    area += triangle_area(a, b, c);
  }
  return area;
}

double min_inradius(const SurfaceMesh& mesh) {
  double r = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < mesh.triangle_count(); ++k) {
    const auto [a, b, c] = mesh.corners(k);
    const double semi = 0.5 * (norm(b - a) + norm(c - b) + norm(a - c));
    r = std::min(r, triangle_area(a, b, c) / semi);
  }
  return r;
}

double max_level_set_residual(const SurfaceMesh& mesh) {
  double r = 0.0;
  for (const auto& p : mesh.nodes()) {
    r = std::max(r, std::abs(mesh.surface().level_set_value(p, mesh.time())));
  }
  return r;
}

bool is_admissible(const SurfaceMesh& mesh) {
  // directed edge -> number of uses
  std::map<Edge, int> directed;
  for (std::size_t k = 0; k < mesh.triangle_count(); ++k) {
    const auto& t = mesh.triangles()[k];
    for (int e = 0; e < 3; ++e) {
      const int a = t[e], b = t[(e + 1) % 3];
      if (a == b) return false;
      if (++directed[{a, b}] > 1) return false;
    }
    const auto [p, q, r] = mesh.corners(k);
    if (!(triangle_area(p, q, r) > kMinTriangleArea)) return false;
  }
  return std::all_of(directed.begin(), directed.end(), [&](const auto& entry) {
    return directed.count({entry.first.second, entry.first.first}) == 1;
  });
}

void check_admissible(const SurfaceMesh& mesh) {
  for (std::size_t k = 0; k < mesh.triangle_count(); ++k) {
    const auto [p, q, r] = mesh.corners(k);
    if (!(triangle_area(p, q, r) > kMinTriangleArea)) {
      fail(ErrorCode::DegenerateTriangle, "triangle " + std::to_string(k) + " is degenerate");
    }
  }
  if (!is_admissible(mesh)) {
    fail(ErrorCode::InvalidArgument, "mesh is not a closed, consistently oriented triangulation");
  }
}

MeshHierarchy::MeshHierarchy(SurfaceMesh coarse) { levels_.push_back(std::move(coarse)); }

MeshHierarchy::MeshHierarchy(SurfaceMesh coarse, int extra_levels)
    : MeshHierarchy(std::move(coarse)) {
  for (int i = 0; i < extra_levels; ++i) add_level();
}

void MeshHierarchy::add_level() {
  auto refined = refine_with_parents(levels_.back());
  levels_.push_back(std::move(refined.mesh));
  parents_.push_back(std::move(refined.parents));
}

const std::vector<ParentRecord>& MeshHierarchy::parents(std::size_t fine_level) const {
  if (fine_level == 0 || fine_level >= levels_.size()) {
    fail(ErrorCode::LevelOutOfRange, "no parent map for level " + std::to_string(fine_level));
  }
  return parents_[fine_level - 1];
}

std::vector<double> MeshHierarchy::prolong(std::size_t coarse_level,
                                           std::span<const double> values) const {
  if (coarse_level + 1 >= levels_.size()) {
    fail(ErrorCode::LevelOutOfRange,
         "cannot prolong from level " + std::to_string(coarse_level) + " of " +
             std::to_string(levels_.size()));
  }
  if (values.size() != levels_[coarse_level].node_count()) {
    fail(ErrorCode::LengthMismatch, "prolongation input does not match coarse node count");
  }
  const auto& records = parents_[coarse_level];
  std::vector<double> fine(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& rec = records[i];
    double v = 0.0;
    for (int k = 0; k < rec.count; ++k) v += rec.weights[k] * values[rec.vertices[k]];
    fine[i] = v;
  }
  return fine;
}

std::vector<double> MeshHierarchy::prolong_to(std::size_t from, std::size_t to,
                                              std::span<const double> values) const {
  if (to < from || to >= levels_.size()) {
    fail(ErrorCode::LevelOutOfRange, "invalid prolongation range");
  }
  std::vector<double> v(values.begin(), values.end());
  for (std::size_t l = from; l < to; ++l) v = prolong(l, v);
  return v;
}

}  // namespace escher
