#include "escher/assembly.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <string>
#include <thread>

#include "escher/error.hpp"

namespace escher {

namespace {

constexpr double kMinTriangleArea = 1e-14;
constexpr std::size_t kMinElementsPerThread = 4096;

double checked_area(const Vec3& a, const Vec3& b, const Vec3& c) {
  const double area = triangle_area(a, b, c);
  if (!(area > kMinTriangleArea)) {
    fail(ErrorCode::DegenerateTriangle, "triangle area " + std::to_string(area));
  }
  return area;
}

void check_length(const SurfaceMesh& mesh, std::span<const double> alpha) {
  if (alpha.size() != mesh.node_count()) {
    fail(ErrorCode::LengthMismatch, "coefficient vector does not match node count");
  }
}

/// Runs fn(first, last, chunk) over contiguous triangle ranges. Chunks are disjoint and their
/// results are combined by the caller in chunk order, so output does not depend on threading.
std::size_t for_each_chunk(std::size_t count,
                           const std::function<void(std::size_t, std::size_t, std::size_t)>& fn) {
  const std::size_t by_size = std::max<std::size_t>(1, count / kMinElementsPerThread);
  const std::size_t chunks = std::min<std::size_t>(assembly_threads(), by_size);
  if (chunks <= 1) {
    fn(0, count, 0);
    return 1;
  }
  std::vector<std::thread> workers;
  workers.reserve(chunks);
  for (std::size_t c = 0; c < chunks; ++c) {
    const std::size_t first = count * c / chunks;
    const std::size_t last = count * (c + 1) / chunks;
    workers.emplace_back(fn, first, last, c);
  }
  for (auto& w : workers) w.join();
  return chunks;
}

using ElementKernel = std::function<ElementMatrix(std::size_t k, const std::array<Vec3, 3>&)>;

SparseMatrix assemble_matrix(const SurfaceMesh& mesh, const ElementKernel& kernel) {
  const std::size_t count = mesh.triangle_count();
  std::vector<std::vector<Triplet>> buffers(std::max(1, assembly_threads()));
  const std::size_t used = for_each_chunk(count, [&](std::size_t first, std::size_t last,
                                                     std::size_t chunk) {
    auto& out = buffers[chunk];
    out.reserve(9 * (last - first));
    for (std::size_t k = first; k < last; ++k) {
      const auto& tri = mesh.triangles()[k];
      const ElementMatrix local = kernel(k, mesh.corners(k));
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) out.push_back({tri[i], tri[j], local[i][j]});
      }
    }
  });
  std::vector<Triplet> all;
  all.reserve(9 * count);
  for (std::size_t c = 0; c < used; ++c) all.insert(all.end(), buffers[c].begin(), buffers[c].end());
  const int n = static_cast<int>(mesh.node_count());
  return SparseMatrix::from_triplets(n, n, all);
}

}  // namespace

int assembly_threads() {
  int threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  if (const char* env = std::getenv("ESCHER_THREADS")) {
    const int cap = std::atoi(env);
    if (cap >= 1) threads = std::min(threads, cap);
  }
  return threads;
}

ElementMatrix element_mass_matrix(const Vec3& a, const Vec3& b, const Vec3& c) {
  const double s = checked_area(a, b, c) / 12.0;
  ElementMatrix m{};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) m[i][j] = (i == j ? 2.0 : 1.0) * s;
  }
  return m;
}

ElementMatrix element_stiffness_matrix(const Vec3& a, const Vec3& b, const Vec3& c) {
  const double area = checked_area(a, b, c);
  // edge opposite vertex i, oriented cyclically; grad(phi_i) is its in-plane rotation / (2|K|)
  const std::array<Vec3, 3> edge = {c - b, a - c, b - a};
  ElementMatrix m{};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) m[i][j] = dot(edge[i], edge[j]) / (4.0 * area);
  }
  return m;
}

SparseMatrix assemble_mass(const SurfaceMesh& mesh) {
  return assemble_matrix(mesh, [](std::size_t, const std::array<Vec3, 3>& p) {
    return element_mass_matrix(p[0], p[1], p[2]);
  });
}

SparseMatrix assemble_stiffness(const SurfaceMesh& mesh) {
  return assemble_matrix(mesh, [](std::size_t, const std::array<Vec3, 3>& p) {
    return element_stiffness_matrix(p[0], p[1], p[2]);
  });
}

std::vector<double> assemble_nonlinear_load(const SurfaceMesh& mesh, std::span<const double> alpha,
                                            const Potential& potential,
                                            const QuadratureRule& rule) {
  check_length(mesh, alpha);
  const std::size_t count = mesh.triangle_count();
  std::vector<std::vector<std::array<double, 3>>> local(std::max(1, assembly_threads()));
  const std::size_t used = for_each_chunk(count, [&](std::size_t first, std::size_t last,
                                                     std::size_t chunk) {
    auto& out = local[chunk];
    out.resize(last - first);
    for (std::size_t k = first; k < last; ++k) {
      const auto& tri = mesh.triangles()[k];
      const auto [a, b, c] = mesh.corners(k);
      const double area = triangle_area(a, b, c);
      std::array<double, 3> f{};
      for (std::size_t q = 0; q < rule.weights.size(); ++q) {
        const auto& l = rule.points[q];
        const double u = l[0] * alpha[tri[0]] + l[1] * alpha[tri[1]] + l[2] * alpha[tri[2]];
        const double g = rule.weights[q] * area * potential.convex_derivative(u);
        for (int j = 0; j < 3; ++j) f[j] += g * l[j];
      }
      out[k - first] = f;
    }
  });
  std::vector<double> load(mesh.node_count(), 0.0);
  std::size_t k = 0;
  for (std::size_t c = 0; c < used; ++c) {
    for (const auto& f : local[c]) {
      const auto& tri = mesh.triangles()[k++];
      for (int j = 0; j < 3; ++j) load[tri[j]] += f[j];
    }
  }
  return load;
}

SparseMatrix assemble_nonlinear_jacobian(const SurfaceMesh& mesh, std::span<const double> alpha,
                                         const Potential& potential,
                                         const QuadratureRule& rule) {
  check_length(mesh, alpha);
  return assemble_matrix(mesh, [&](std::size_t k, const std::array<Vec3, 3>& p) {
    const auto& tri = mesh.triangles()[k];
    const double area = triangle_area(p[0], p[1], p[2]);
    ElementMatrix m{};
    for (std::size_t q = 0; q < rule.weights.size(); ++q) {
      const auto& l = rule.points[q];
      const double u = l[0] * alpha[tri[0]] + l[1] * alpha[tri[1]] + l[2] * alpha[tri[2]];
      const double g = rule.weights[q] * area * potential.convex_second_derivative(u);
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) m[i][j] += g * l[i] * l[j];
      }
    }
    return m;
  });
}

double integrate_potential(const SurfaceMesh& mesh, std::span<const double> alpha,
                           const Potential& potential, const QuadratureRule& rule) {
  check_length(mesh, alpha);
  double total = 0.0;
  for (std::size_t k = 0; k < mesh.triangle_count(); ++k) {
    const auto& tri = mesh.triangles()[k];
    const auto [a, b, c] = mesh.corners(k);
    const double area = triangle_area(a, b, c);
    double s = 0.0;
    for (std::size_t q = 0; q < rule.weights.size(); ++q) {
      const auto& l = rule.points[q];
      const double u = l[0] * alpha[tri[0]] + l[1] * alpha[tri[1]] + l[2] * alpha[tri[2]];
      s += rule.weights[q] * potential.value(u);
    }
    total += area * s;
  }
  return total;
}

AssembledOperators assemble_operators(const SurfaceMesh& mesh) {
  return {assemble_mass(mesh), assemble_stiffness(mesh), mesh.node_count(), mesh.time()};
}

}  // namespace escher
