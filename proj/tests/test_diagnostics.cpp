#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "escher/assembly.hpp"
#include "escher/diagnostics.hpp"
#include "escher/error.hpp"
#include "escher/mesh.hpp"
#include "escher/simulation.hpp"

using namespace escher;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> smooth_field(const SurfaceMesh& mesh) {
  std::vector<double> v;
  for (const auto& x : mesh.nodes()) v.push_back(std::sin(2 * x.x) * x.y + 0.3 * x.z * x.z);
  return v;
}

}  // namespace

TEST_CASE("energy") {
  const auto mesh = build_icosphere(LevelSetSurface::static_sphere(1.0), 4, 0.0);
  const auto pot = Potential::quartic();
  const double eps = 0.05;
  const std::vector<double> ones(mesh.node_count(), 1.0);
  CHECK(std::abs(ginzburg_landau_energy(mesh, ones, pot, eps)) <= 1e-14);

  const std::vector<double> zero(mesh.node_count(), 0.0);
  const double e0 = ginzburg_landau_energy(mesh, zero, pot, eps);
  CHECK(e0 == doctest::Approx(0.25 * surface_area(mesh) / eps).epsilon(1e-13));
  CHECK(std::abs(e0 - kPi / eps) <= 5e-3 * kPi / eps);

  // Gradient part: (eps / 2) alpha^T A alpha.
  const auto ops = assemble_operators(mesh);
  const auto u = smooth_field(mesh);
  const double expected = 0.5 * eps * dot(u, ops.stiffness * u) +
                          integrate_potential(mesh, u, pot) / eps;
  CHECK(ginzburg_landau_energy(mesh, u, pot, eps) == doctest::Approx(expected).epsilon(1e-13));
  CHECK(ginzburg_landau_energy(mesh, ops, u, pot, eps) ==
        doctest::Approx(expected).epsilon(1e-13));
}

TEST_CASE("energy is invariant under node relabelling") {
  const auto mesh = build_icosphere(LevelSetSurface::oscillating_sphere(), 3, 0.0);
  const auto u = smooth_field(mesh);
  const auto n = mesh.node_count();
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::mt19937 rng(99);
  std::shuffle(perm.begin(), perm.end(), rng);
  // perm maps old index -> new index.
  std::vector<Vec3> nodes(n);
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) {
    nodes[perm[i]] = mesh.nodes()[i];
    v[perm[i]] = u[i];
  }
  auto tris = mesh.triangles();
  for (auto& t : tris)
    for (auto& k : t) k = perm[k];
  std::shuffle(tris.begin(), tris.end(), rng);
  const SurfaceMesh relabelled(nodes, tris, mesh.surface(), mesh.time());
  const auto pot = Potential::quartic();
  CHECK(ginzburg_landau_energy(relabelled, v, pot, 0.05) ==
        doctest::Approx(ginzburg_landau_energy(mesh, u, pot, 0.05)).epsilon(1e-12));
  CHECK(discrete_mass(relabelled, v) == doctest::Approx(discrete_mass(mesh, u)).epsilon(1e-12));
}

TEST_CASE("mass") {
  const auto mesh = build_torus_mesh(LevelSetSurface::constant_area_torus(), 24, 12, 0.0);
  const std::vector<double> ones(mesh.node_count(), 1.0);
  const std::vector<double> zero(mesh.node_count(), 0.0);
  CHECK(discrete_mass(mesh, ones) == doctest::Approx(surface_area(mesh)).epsilon(1e-13));
  CHECK(discrete_mass(mesh, zero) == 0.0);
}

TEST_CASE("discrete H^-1 norm") {
  const auto pot_mesh = build_icosphere(LevelSetSurface::static_sphere(1.0), 3, 0.0);
  const auto ops = assemble_operators(pot_mesh);
  const std::vector<double> zero(pot_mesh.node_count(), 0.0);
  CHECK(hminus1_norm(ops, zero) == 0.0);

  const auto z = remove_mean(ops, smooth_field(pot_mesh));
  CHECK(std::abs(discrete_mass(ops, z)) <= 1e-13);
  const double nz = hminus1_norm(ops, z);
  CHECK(nz > 0.0);

  auto scaled = z;
  for (auto& v : scaled) v *= -3.0;
  CHECK(hminus1_norm(ops, scaled) == doctest::Approx(3.0 * nz).epsilon(1e-10));

  // ||z||_{-1}^2 = z^T M G z.
  const auto g = inverse_laplacian(ops, z);
  CHECK(nz * nz == doctest::Approx(dot(z, ops.mass * g)).epsilon(1e-10));
  CHECK(std::abs(discrete_mass(ops, g)) <= 1e-12);

  auto bad = z;
  for (auto& v : bad) v += 1.0;
  try {
    hminus1_norm(ops, bad);
    FAIL("expected IncompatibleRhs");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::IncompatibleRhs);
  }

  SUBCASE("bounded by the L2 norm uniformly in h") {
    std::vector<double> ratios;
    for (int sub = 2; sub <= 4; ++sub) {
      const auto mesh = build_icosphere(LevelSetSurface::static_sphere(1.0), sub, 0.0);
      const auto o = assemble_operators(mesh);
      const auto zz = remove_mean(o, smooth_field(mesh));
      ratios.push_back(hminus1_norm(o, zz) / std::sqrt(dot(zz, o.mass * zz)));
    }
    // First nonzero Laplace eigenvalue on the unit sphere is 2, so the ratio is at most 1/sqrt 2.
    for (double r : ratios) CHECK(r <= 1.0 / std::sqrt(2.0) * 1.01);
    CHECK(*std::max_element(ratios.begin(), ratios.end()) <=
          1.05 * *std::min_element(ratios.begin(), ratios.end()));
  }
}

TEST_CASE("error norms") {
  const auto mesh = build_icosphere(LevelSetSurface::static_sphere(1.0), 3, 0.0);
  const auto ops = assemble_operators(mesh);
  const auto a = smooth_field(mesh);
  CHECK(l2_error(ops, a, a) == 0.0);
  CHECK(h1_semi_error(ops, a, a) == 0.0);

  auto shifted = a;
  for (auto& v : shifted) v += 0.4;
  CHECK(l2_error(ops, shifted, a) == doctest::Approx(0.4 * std::sqrt(surface_area(mesh))));
  CHECK(h1_semi_error(ops, shifted, a) <= 1e-7);
  CHECK(l2_error(mesh, shifted, a) == doctest::Approx(l2_error(ops, shifted, a)));

  std::mt19937 rng(8);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int k = 0; k < 20; ++k) {
    std::vector<double> x(a.size()), y(a.size()), z(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      x[i] = u(rng);
      y[i] = u(rng);
      z[i] = u(rng);
    }
    CHECK(l2_error(ops, x, z) <= l2_error(ops, x, y) + l2_error(ops, y, z) + 1e-14);
    CHECK(h1_semi_error(ops, x, z) <= h1_semi_error(ops, x, y) + h1_semi_error(ops, y, z) + 1e-14);
  }

  const std::vector<double> short_vec(3, 0.0);
  try {
    l2_error(ops, a, short_vec);
    FAIL("expected LengthMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::LengthMismatch);
  }
  CHECK_THROWS_AS(h1_semi_error(ops, short_vec, a), Error);
}

TEST_CASE("EOC tables") {
  SUBCASE("published rows") {
    const std::vector<double> hs = {6.123724e-1, 3.061862e-1, 1.530931e-1, 7.654655e-2};
    const std::vector<double> eu = {6.837856e-1, 2.181480e-1, 5.132094e-2, 1.150091e-2};
    const auto t = eoc(eu, hs);
    REQUIRE(t.rows.size() == 4);
    CHECK_FALSE(t.rows[0].eoc.has_value());
    CHECK(*t.rows[1].eoc == doctest::Approx(1.648237).epsilon(1e-6));
    CHECK(*t.rows[2].eoc == doctest::Approx(2.087688).epsilon(1e-6));
    CHECK(*t.rows[3].eoc == doctest::Approx(2.157799).epsilon(1e-6));

    const std::vector<double> ew = {4.020470e-1, 1.272730e-1, 2.823982e-2, 5.847620e-3};
    const auto tw = eoc(ew, hs, NormKind::L2, "w");
    CHECK(tw.variable == "w");
    CHECK(*tw.rows[1].eoc == doctest::Approx(1.659437).epsilon(1e-6));
    CHECK(*tw.rows[2].eoc == doctest::Approx(2.172124).epsilon(1e-6));
    CHECK(*tw.rows[3].eoc == doctest::Approx(2.271810).epsilon(1e-6));
  }

  SUBCASE("exact orders") {
    const std::vector<double> h = {1.0, 0.5};
    CHECK(*eoc(std::vector<double>{4, 1}, h).rows[1].eoc == doctest::Approx(2.0));
    CHECK(*eoc(std::vector<double>{2, 1}, h).rows[1].eoc == doctest::Approx(1.0));
    CHECK(to_string(eoc(std::vector<double>{2, 1}, h, NormKind::H1Semi).norm) ==
          to_string(NormKind::H1Semi));
  }

  SUBCASE("errors") {
    const std::vector<double> h = {1.0, 0.5};
    try {
      eoc(std::vector<double>{1.0, 0.0}, h);
      FAIL("expected ZeroError");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::ZeroError);
    }
    CHECK_THROWS_AS(eoc(std::vector<double>{1.0, 0.5}, std::vector<double>{0.5, 1.0}), Error);
    CHECK_THROWS_AS(eoc(std::vector<double>{1.0}, std::vector<double>{0.5}), Error);
    CHECK_THROWS_AS(eoc(std::vector<double>{1.0, 0.5, 0.2}, h), Error);
  }
}

TEST_CASE("interpolation error converges at the expected rates") {
  // Interpolation of a smooth function, measured against the interpolant on a mesh three
  // levels finer.
  const auto s = LevelSetSurface::static_sphere(1.0);
  const MeshHierarchy hierarchy(build_icosphere(s, 0, 0.0), 6);
  const auto f = [](const Vec3& x) { return std::sin(3 * x.x) * std::cos(2 * x.y) + x.z; };
  const std::size_t top = 6;
  const auto fine = initial_data_interpolate(hierarchy.level(top), f);
  const auto ops = assemble_operators(hierarchy.level(top));
  std::vector<double> hs, e0, e1;
  for (std::size_t l = 1; l <= 3; ++l) {
    const auto coarse = initial_data_interpolate(hierarchy.level(l), f);
    const auto lifted = hierarchy.prolong_to(l, top, coarse);
    hs.push_back(mesh_size_h(hierarchy.level(l)));
    e0.push_back(l2_error(ops, lifted, fine));
    e1.push_back(h1_semi_error(ops, lifted, fine));
  }
  const auto t0 = eoc(e0, hs);
  const auto t1 = eoc(e1, hs, NormKind::H1Semi);
  CHECK(std::abs(*t0.rows.back().eoc - 2.0) <= 0.1);
  CHECK(std::abs(*t1.rows.back().eoc - 1.0) <= 0.15);
}
