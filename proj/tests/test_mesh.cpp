#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "escher/error.hpp"
#include "escher/mesh.hpp"

using namespace escher;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> sample(const SurfaceMesh& mesh, double (*f)(const Vec3&)) {
  std::vector<double> v;
  for (const auto& x : mesh.nodes()) v.push_back(f(x));
  return v;
}

}  // namespace

TEST_CASE("icosphere combinatorics") {
  const auto s = LevelSetSurface::static_sphere(1.0);
  for (int sub = 0; sub <= 4; ++sub) {
    const auto mesh = build_icosphere(s, sub, 0.0);
    const std::size_t p = std::size_t{1} << (2 * sub);
    CHECK(mesh.node_count() == 10 * p + 2);
    CHECK(mesh.triangle_count() == 20 * p);
    CHECK(is_admissible(mesh));
    CHECK(max_level_set_residual(mesh) <= 1e-10);
  }
  const auto two = build_icosphere(s, 2, 0.0);
  CHECK(two.node_count() == 162);
  CHECK(two.triangle_count() == 320);
  CHECK_THROWS_AS(build_icosphere(LevelSetSurface::periodic_torus(), 1, 0.0), Error);
}

TEST_CASE("icosphere geometry") {
  const auto s = LevelSetSurface::static_sphere(1.0);
  const auto base = build_icosphere(s, 0, 0.0);
  CHECK(mesh_size_h(base) == doctest::Approx(4.0 / std::sqrt(10.0 + 2.0 * std::sqrt(5.0))));
  CHECK(mesh_size_h(base) == doctest::Approx(1.051462).epsilon(1e-6));
  const auto fine = build_icosphere(s, 5, 0.0);
  CHECK(std::abs(surface_area(fine) - 4 * kPi) <= 1e-3 * 4 * kPi);
  // Outward orientation: the signed volume is positive.
  double volume = 0.0;
  for (std::size_t k = 0; k < fine.triangle_count(); ++k) {
    const auto [a, b, c] = fine.corners(k);
    volume += dot(a, cross(b, c)) / 6.0;
  }
  CHECK(volume > 0.0);
  CHECK(volume == doctest::Approx(4.0 * kPi / 3.0).epsilon(2e-3));
}

TEST_CASE("torus grid") {
  const auto s = LevelSetSurface::constant_area_torus();
  const auto small = build_torus_mesh(s, 4, 3, 0.0);
  CHECK(small.node_count() == 12);
  CHECK(small.triangle_count() == 24);
  CHECK(is_admissible(small));

  const auto grid_64x47 = build_torus_mesh(s, 64, 47, 0.0);
  CHECK(grid_64x47.triangle_count() == 6016);
  CHECK(is_admissible(grid_64x47));
  CHECK(max_level_set_residual(grid_64x47) <= 1e-10);

  const auto fine = build_torus_mesh(s, 128, 128, 0.0);
  CHECK(std::abs(surface_area(fine) - 3 * kPi * kPi / 4) <= 5e-3 * 3 * kPi * kPi / 4);

  CHECK_THROWS_AS(build_torus_mesh(LevelSetSurface::oscillating_sphere(), 8, 8, 0.0), Error);
  CHECK_THROWS_AS(build_torus_mesh(s, 2, 8, 0.0), Error);
}

TEST_CASE("constant area torus keeps its area under motion") {
  const auto s = LevelSetSurface::constant_area_torus();
  const auto mesh = build_torus_mesh(s, 128, 96, 0.0);
  for (double t : {0.0, 0.5, 1.0}) {
    const auto moved = advance_mesh(mesh, t);
    CHECK(std::abs(surface_area(moved) - 3 * kPi * kPi / 4) <= 1e-2 * 3 * kPi * kPi / 4);
    CHECK(is_admissible(moved));
  }
}

TEST_CASE("refinement") {
  const auto s = LevelSetSurface::oscillating_sphere();
  const auto base = build_icosphere(s, 0, 0.0);
  const auto refined = refine_with_parents(base);
  CHECK(refined.mesh.node_count() == 42);
  CHECK(refined.mesh.triangle_count() == 80);
  CHECK(refined.parents.size() == 42);
  CHECK(mesh_size_h(refined.mesh) < mesh_size_h(base));
  CHECK(is_admissible(refined.mesh));
  CHECK(max_level_set_residual(refined.mesh) <= 1e-10);

  for (std::size_t i = 0; i < refined.parents.size(); ++i) {
    const auto& p = refined.parents[i];
    double sum = 0.0;
    for (int k = 0; k < p.count; ++k) sum += p.weights[k];
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-15));
    if (i < base.node_count()) {
      CHECK(p.count == 1);
      CHECK(p.vertices[0] == static_cast<int>(i));
      CHECK(refined.mesh.nodes()[i] == base.nodes()[i]);
    } else {
      CHECK(p.count == 2);
      CHECK(p.weights[0] == 0.5);
      CHECK(p.weights[1] == 0.5);
    }
  }

  const auto twice = refine(refine(build_icosphere(s, 1, 0.0)));
  const auto direct = build_icosphere(s, 3, 0.0);
  CHECK(twice.node_count() == direct.node_count());
  CHECK(twice.triangle_count() == direct.triangle_count());

  const auto torus = build_torus_mesh(LevelSetSurface::periodic_torus(), 12, 8, 0.0);
  const auto torus_fine = refine(torus);
  CHECK(torus_fine.node_count() == 4 * 96);
  CHECK(torus_fine.triangle_count() == 4 * 192);
  CHECK(is_admissible(torus_fine));
}

TEST_CASE("advancing the mesh") {
  const auto s = LevelSetSurface::oscillating_sphere();
  const auto mesh = build_icosphere(s, 3, 0.0);
  const auto same = advance_mesh(mesh, 0.0);
  CHECK(same.nodes() == mesh.nodes());

  const auto moved = advance_mesh(mesh, 0.05);
  CHECK(moved.triangles() == mesh.triangles());
  CHECK(moved.time() == 0.05);
  for (const auto& x : moved.nodes()) CHECK(norm(x) == doctest::Approx(std::sqrt(0.8)));

  CHECK_THROWS_AS(advance_mesh(moved, 0.01), Error);

  SUBCASE("advancement is a flow") {
    for (const auto& surf : {LevelSetSurface::oscillating_sphere(),
                             LevelSetSurface::constant_area_torus(),
                             LevelSetSurface::periodic_torus()}) {
      const auto m = surf.is_sphere() ? build_icosphere(surf, 2, 0.0)
                                      : build_torus_mesh(surf, 16, 12, 0.0);
      const auto two_steps = advance_mesh(advance_mesh(m, 0.013), 0.071);
      const auto one_step = advance_mesh(m, 0.071);
      for (std::size_t i = 0; i < m.node_count(); ++i) {
        CHECK(norm(two_steps.nodes()[i] - one_step.nodes()[i]) <= 1e-10);
      }
    }
  }
}

TEST_CASE("mesh size is homogeneous") {
  const auto mesh = build_icosphere(LevelSetSurface::static_sphere(1.0), 2, 0.0);
  std::vector<Vec3> scaled;
  for (const auto& x : mesh.nodes()) scaled.push_back(2.0 * x);
  const SurfaceMesh big(scaled, mesh.triangles(), LevelSetSurface::static_sphere(2.0), 0.0);
  CHECK(mesh_size_h(big) == doctest::Approx(2.0 * mesh_size_h(mesh)).epsilon(1e-14));
}

TEST_CASE("quasi-uniformity over a run") {
  const auto s = LevelSetSurface::oscillating_sphere();
  const auto sphere = build_icosphere(s, 3, 0.0);
  const auto torus_surface = LevelSetSurface::constant_area_torus();
  const auto torus = build_torus_mesh(torus_surface, 40, 20, 0.0);
  double worst_sphere = 1.0, worst_torus = 1.0;
  for (int n = 0; n <= 100; ++n) {
    const double t = 0.001 * n;
    const auto a = advance_mesh(sphere, t);
    const auto b = advance_mesh(torus, t);
    worst_sphere = std::min(worst_sphere, min_inradius(a) / mesh_size_h(a));
    worst_torus = std::min(worst_torus, min_inradius(b) / mesh_size_h(b));
    CHECK(is_admissible(a));
    CHECK(is_admissible(b));
  }
  CHECK(worst_sphere >= 0.2);
  CHECK(worst_torus >= 0.05);
}

TEST_CASE("admissibility detects broken meshes") {
  const auto mesh = build_icosphere(LevelSetSurface::static_sphere(1.0), 1, 0.0);
  auto tris = mesh.triangles();
  tris.pop_back();
  const SurfaceMesh open(mesh.nodes(), tris, mesh.surface(), 0.0);
  CHECK_FALSE(is_admissible(open));
  CHECK_THROWS_AS(check_admissible(open), Error);

  auto flipped = mesh.triangles();
  std::swap(flipped[0][0], flipped[0][1]);
  CHECK_FALSE(is_admissible(SurfaceMesh(mesh.nodes(), flipped, mesh.surface(), 0.0)));

  auto nodes = mesh.nodes();
  const auto t0 = mesh.triangles()[0];
  nodes[t0[2]] = 0.5 * (nodes[t0[0]] + nodes[t0[1]]);
  try {
    check_admissible(SurfaceMesh(nodes, mesh.triangles(), mesh.surface(), 0.0));
    FAIL("expected DegenerateTriangle");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegenerateTriangle);
  }
}

TEST_CASE("prolongation") {
  const auto s = LevelSetSurface::oscillating_sphere();
  MeshHierarchy hierarchy(build_icosphere(s, 0, 0.0), 2);
  REQUIRE(hierarchy.level_count() == 3);
  CHECK(hierarchy.level(1).node_count() > hierarchy.level(0).node_count());
  CHECK(hierarchy.level(2).node_count() > hierarchy.level(1).node_count());
  CHECK(hierarchy.parents(1).size() == hierarchy.level(1).node_count());

  SUBCASE("constants are reproduced") {
    const std::vector<double> c(hierarchy.level(0).node_count(), 3.25);
    for (double v : hierarchy.prolong_to(0, 2, c)) CHECK(v == 3.25);
  }

  SUBCASE("linear functions are reproduced on flat parents") {
    const auto lin = [](const Vec3& x) { return 1.0 + 2.0 * x.x - 0.5 * x.y + 0.25 * x.z; };
    std::vector<double> coarse;
    for (const auto& x : hierarchy.level(0).nodes()) coarse.push_back(lin(x));
    const auto fine = hierarchy.prolong(0, coarse);
    const auto& parents = hierarchy.parents(1);
    for (std::size_t i = 0; i < fine.size(); ++i) {
      Vec3 flat{0, 0, 0};
      for (int k = 0; k < parents[i].count; ++k) {
        flat += parents[i].weights[k] * hierarchy.level(0).nodes()[parents[i].vertices[k]];
      }
      CHECK(fine[i] == doctest::Approx(lin(flat)).epsilon(1e-14));
    }
  }

  SUBCASE("hat function halves at edge children") {
    std::vector<double> hat(hierarchy.level(0).node_count(), 0.0);
    hat[3] = 1.0;
    const auto fine = hierarchy.prolong(0, hat);
    const auto& parents = hierarchy.parents(1);
    int halves = 0;
    for (std::size_t i = 0; i < fine.size(); ++i) {
      const auto& p = parents[i];
      const bool touches =
          std::find(p.vertices.begin(), p.vertices.begin() + p.count, 3) !=
          p.vertices.begin() + p.count;
      if (p.count == 2 && touches) {
        CHECK(fine[i] == 0.5);
        ++halves;
      } else if (p.count == 1 && touches) {
        CHECK(fine[i] == 1.0);
      } else {
        CHECK(fine[i] == 0.0);
      }
    }
    CHECK(halves == 5);  // icosahedron vertices have valence 5
  }

  SUBCASE("discrete maximum principle") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    std::vector<double> v(hierarchy.level(0).node_count());
    for (auto& x : v) x = u(rng);
    const double lo = *std::min_element(v.begin(), v.end());
    const double hi = *std::max_element(v.begin(), v.end());
    for (double x : hierarchy.prolong_to(0, 2, v)) {
      CHECK(x >= lo);
      CHECK(x <= hi);
    }
  }

  SUBCASE("errors") {
    const std::vector<double> wrong(5, 0.0);
    try {
      hierarchy.prolong(0, wrong);
      FAIL("expected LengthMismatch");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::LengthMismatch);
    }
    const std::vector<double> fine(hierarchy.level(2).node_count(), 0.0);
    try {
      hierarchy.prolong(2, fine);
      FAIL("expected LevelOutOfRange");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::LevelOutOfRange);
    }
    CHECK_THROWS_AS(hierarchy.prolong_to(2, 1, fine), Error);
  }

  SUBCASE("identity prolongation") {
    const auto v = sample(hierarchy.level(1), [](const Vec3& x) { return x.z; });
    CHECK(hierarchy.prolong_to(1, 1, v) == v);
  }
}
