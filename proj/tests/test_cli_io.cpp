#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "escher/commands.hpp"
#include "escher/config.hpp"
#include "escher/error.hpp"
#include "escher/mesh.hpp"
#include "escher/output.hpp"

using namespace escher;
namespace fs = std::filesystem;

namespace {

const char* kMinimalSphere =
    "# static sphere smoke configuration\n"
    "surface = static_sphere\n"
    "mesh.subdivisions = 2\n"
    "epsilon = 0.1\n"
    "tau = 1e-3\n"
    "final_time = 1e-2\n"
    "scheme = imex\n";

fs::path scratch_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("escher_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

ErrorCode code_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::InvalidArgument;
}

std::string message_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

int run_cli(std::vector<std::string> args, std::string* out_text = nullptr) {
  std::vector<const char*> argv = {"escher"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
  if (out_text) *out_text = out.str() + err.str();
  return code;
}

std::size_t count_lines(const std::string& s) {
  std::size_t n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

}  // namespace

TEST_CASE("minimal config parses with defaults") {
  const auto c = parse_config(kMinimalSphere);
  CHECK(c.surface == SurfaceKind::StaticSphere);
  CHECK(c.subdivisions == 2);
  CHECK(c.epsilon == 0.1);
  CHECK(c.tau == 1e-3);
  CHECK(c.final_time == 1e-2);
  CHECK(c.scheme == SchemeKind::Imex);
  CHECK(c.newton_tol == 1e-11);
  CHECK(c.newton_max_iter == 25);
  CHECK(c.theta == 1.0);
  CHECK(c.potential == "quartic");
  CHECK(c.initial_data == "sphere_eoc");
}

TEST_CASE("torus config with the uniqueness bound satisfied") {
  const auto c = parse_config(
      "surface = periodic_torus\n"
      "epsilon = 0.05\n"
      "tau = 5e-5\n"
      "final_time = 1\n"
      "scheme = fully_implicit\n"
      "initial.data = torus\n");
  CHECK(c.surface == SurfaceKind::PeriodicTorus);
  CHECK(c.tau < 4 * std::pow(c.epsilon, 3) / (c.theta * c.theta));
  CHECK(c.scheme_config().warnings(c.make_potential()).empty());
}

TEST_CASE("config errors") {
  CHECK(code_of("surface = static_sphere\ntau = -1\nfinal_time = 1\n") ==
        ErrorCode::ValidationError);
  CHECK(message_of("surface = static_sphere\ntau = -1\nfinal_time = 1\n").find("tau") !=
        std::string::npos);
  CHECK(code_of("surface = static_sphere\ntau = 0.5\nfinal_time = 0.1\n") ==
        ErrorCode::ValidationError);

  const std::string unknown = "surface = static_sphere\ntau = 1e-3\nbogus = 3\nfinal_time = 1\n";
  CHECK(code_of(unknown) == ErrorCode::ParseError);
  CHECK(message_of(unknown).find("line 3") != std::string::npos);

  const std::string repeated = "surface = static_sphere\n\n# c\ntau = 1e-3\ntau = 2e-3\n";
  CHECK(code_of(repeated) == ErrorCode::ParseError);
  CHECK(message_of(repeated).find("line 5") != std::string::npos);

  CHECK(code_of("surface static_sphere\n") == ErrorCode::ParseError);
  CHECK(code_of("surface = cube\n") == ErrorCode::ParseError);
  CHECK(code_of("surface = static_sphere\ntau = fast\n") == ErrorCode::ParseError);
  CHECK(code_of("surface = static_sphere\nmesh.subdivisions = 2.5\n") == ErrorCode::ParseError);
  const auto nan_code = code_of("surface = static_sphere\ntau = 1e-3\nfinal_time = nan\n");
  CHECK((nan_code == ErrorCode::ParseError || nan_code == ErrorCode::ValidationError));
  CHECK(code_of("tau = 1e-3\nfinal_time = 1\n") == ErrorCode::ValidationError);
  CHECK(code_of("surface = static_sphere\ntau = 1e-3\nfinal_time = 1\nepsilon = 0\n") ==
        ErrorCode::ValidationError);
  CHECK_THROWS_AS(load_config("/nonexistent/escher.cfg"), Error);
}

TEST_CASE("emit and parse round trip") {
  auto c = parse_config(kMinimalSphere);
  CHECK(parse_config(emit_config(c)) == c);

  c.surface = SurfaceKind::ConstantAreaTorus;
  c.n_major = 40;
  c.n_minor = 19;
  c.epsilon = 0.1 / 3.0;
  c.theta = 0.7;
  c.tau = 1.0 / 7.0 * 1e-3;
  c.final_time = 1000 * c.tau;
  c.scheme = SchemeKind::FullyImplicit;
  c.initial_data = "constant";
  c.initial_constant = -0.3;
  c.initial_projection = InitialProjection::Ritz;
  c.newton_tol = 3e-12;
  c.newton_max_iter = 40;
  c.linear_solver = LinearSolverKind::BiCgStab;
  c.output_directory = "out/dir";
  c.snapshot_every = 7;
  c.eoc_levels = 3;
  c.eoc_coarse_steps = 5;
  c.eoc_reference_steps = 999;
  c.seed = 12345;
  const auto text = emit_config(c);
  CHECK(parse_config(text) == c);
  CHECK(emit_config(parse_config(text)) == text);
}

TEST_CASE("vtk output") {
  const auto dir = scratch_dir("vtk");
  const auto mesh = build_icosphere(LevelSetSurface::static_sphere(1.0), 0, 0.0);
  std::vector<double> u(mesh.node_count()), w(mesh.node_count());
  for (std::size_t i = 0; i < u.size(); ++i) {
    u[i] = 1.0 / 3.0 + static_cast<double>(i);
    w[i] = std::sqrt(2.0) * mesh.nodes()[i].z;
  }

  SUBCASE("header counts and precision") {
    std::ostringstream os;
    const NamedArray arrays[] = {{"u", u}};
    write_vtk(os, mesh, arrays);
    const auto text = os.str();
    CHECK(text.find("# vtk DataFile Version 2.0") == 0);
    CHECK(text.find("ASCII") != std::string::npos);
    CHECK(text.find("POINTS 12 double") != std::string::npos);
    CHECK(text.find("POLYGONS 20 80") != std::string::npos);
    CHECK(text.find("POINT_DATA 12") != std::string::npos);
    CHECK(text.find("0.33333333333333331") != std::string::npos);
  }

  SUBCASE("geometry only") {
    std::ostringstream os;
    write_vtk(os, mesh, {});
    CHECK(os.str().find("POINT_DATA") == std::string::npos);
    CHECK(os.str().find("POLYGONS 20 80") != std::string::npos);
  }

  SUBCASE("round trip") {
    const auto path = (dir / "s.vtk").string();
    const NamedArray arrays[] = {{"u", u}, {"w", w}};
    write_vtk(path, mesh, arrays);
    const auto back = read_vtk(path);
    REQUIRE(back.points.size() == mesh.node_count());
    for (std::size_t i = 0; i < back.points.size(); ++i) {
      CHECK(back.points[i].x == mesh.nodes()[i].x);
      CHECK(back.points[i].y == mesh.nodes()[i].y);
      CHECK(back.points[i].z == mesh.nodes()[i].z);
    }
    CHECK(back.triangles == mesh.triangles());
    REQUIRE(back.point_data.size() == 2);
    CHECK(back.point_data[0].first == "u");
    CHECK(back.point_data[1].first == "w");
    CHECK(back.point_data[0].second == u);
    CHECK(back.point_data[1].second == w);
  }

  SUBCASE("errors") {
    const std::vector<double> short_array(3, 0.0);
    const NamedArray bad[] = {{"u", short_array}};
    try {
      std::ostringstream os;
      write_vtk(os, mesh, bad);
      FAIL("expected LengthMismatch");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::LengthMismatch);
    }
    try {
      write_vtk("/nonexistent/dir/s.vtk", mesh, {});
      FAIL("expected IoError");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::IoError);
    }
    CHECK_THROWS_AS(read_vtk((dir / "missing.vtk").string()), Error);
  }
  fs::remove_all(dir);
}

TEST_CASE("csv output") {
  std::vector<DiagnosticRecord> records(2);
  records[1].step = 1;
  records[1].time = 0.5;
  records[1].energy = 1.25;
  records[1].newton_iterations = 4;
  std::ostringstream os;
  write_diagnostics_csv(os, records);
  const auto text = os.str();
  CHECK(text.rfind("step,time,energy,mass,area,h,newton_iters\n", 0) == 0);
  CHECK(count_lines(text) == 3);

  EocTable t = eoc(std::vector<double>{4, 1}, std::vector<double>{1.0, 0.5});
  std::ostringstream es;
  write_eoc_csv(es, t);
  const auto etext = es.str();
  CHECK(etext.rfind("h,error,eoc\n", 0) == 0);
  CHECK(count_lines(etext) == 3);
  // The first row has an empty eoc field.
  const auto second = etext.substr(etext.find('\n') + 1);
  CHECK(second.substr(0, second.find('\n')).back() == ',');
}

TEST_CASE("run command") {
  const auto dir = scratch_dir("run");
  auto c = parse_config(kMinimalSphere);
  c.output_directory = (dir / "a").string();
  c.snapshot_every = 5;
  std::ostringstream log;
  const auto result = cmd_run(c, log);
  CHECK(result.diagnostics.size() == 11);

  const auto csv = read_file(dir / "a" / "diagnostics.csv");
  CHECK(count_lines(csv) == 12);  // header plus N_T + 1 rows
  CHECK(fs::exists(dir / "a" / "snapshot_000000.vtk"));
  CHECK(fs::exists(dir / "a" / "snapshot_000005.vtk"));
  CHECK(fs::exists(dir / "a" / "snapshot_000010.vtk"));
  const auto snap = read_vtk((dir / "a" / "snapshot_000010.vtk").string());
  REQUIRE(snap.point_data.size() == 2);
  CHECK(snap.point_data[0].first == "u");
  CHECK(snap.point_data[1].first == "w");
  CHECK(snap.point_data[0].second == result.final_state.alpha);

  SUBCASE("deterministic") {
    c.output_directory = (dir / "b").string();
    std::ostringstream log2;
    cmd_run(c, log2);
    CHECK(read_file(dir / "b" / "diagnostics.csv") == csv);
  }
  fs::remove_all(dir);
}

TEST_CASE("command line exit codes") {
  const auto dir = scratch_dir("cli");
  const auto good = dir / "good.cfg";
  write_file(good, std::string(kMinimalSphere) + "output.directory = " + (dir / "out").string() +
                       "\n");
  const auto bad = dir / "bad.cfg";
  write_file(bad, "surface = static_sphere\ntau = -1\nfinal_time = 1\n");
  const auto failing = dir / "failing.cfg";
  write_file(failing, std::string(kMinimalSphere) +
                          "solver.newton_max_iter = 1\nsolver.newton_tol = 1e-30\n"
                          "output.directory = " +
                          (dir / "fail").string() + "\n");

  std::string text;
  CHECK(run_cli({"run", good.string()}, &text) == kExitOk);
  CHECK(fs::exists(dir / "out" / "diagnostics.csv"));
  CHECK(run_cli({"run", good.string(), "--output", (dir / "other").string()}) == kExitOk);
  CHECK(fs::exists(dir / "other" / "diagnostics.csv"));

  CHECK(run_cli({"mesh-info", good.string()}, &text) == kExitOk);
  CHECK(text.find("nodes:            162") != std::string::npos);

  CHECK(run_cli({"run", bad.string()}, &text) == kExitConfigError);
  CHECK(text.find("tau") != std::string::npos);
  CHECK(run_cli({"run", (dir / "missing.cfg").string()}) == kExitConfigError);
  CHECK(run_cli({"frobnicate"}) == kExitConfigError);
  CHECK(run_cli({}) == kExitConfigError);
  CHECK(run_cli({"eoc", good.string(), "--levels", "1"}) == kExitConfigError);
  CHECK(run_cli({"run", failing.string()}, &text) == kExitSolverFailure);

  SUBCASE("minimal eoc study") {
    const auto eoc_cfg = dir / "eoc.cfg";
    write_file(eoc_cfg,
               "surface = oscillating_sphere\n"
               "mesh.subdivisions = 0\n"
               "epsilon = 0.5\n"
               "tau = 1e-3\n"
               "final_time = 1e-2\n"
               "eoc.coarse_steps = 2\n"
               "output.directory = " +
                   (dir / "eoc").string() + "\n");
    CHECK(run_cli({"eoc", eoc_cfg.string(), "--levels", "2", "--imex"}) == kExitOk);
    CHECK(count_lines(read_file(dir / "eoc" / "eoc_u.csv")) == 3);
    CHECK(count_lines(read_file(dir / "eoc" / "eoc_w.csv")) == 3);
  }
  fs::remove_all(dir);
}

TEST_CASE("shipped configurations are valid") {
  int count = 0;
  for (const auto& entry : fs::directory_iterator(ESCHER_CONFIG_DIR)) {
    if (entry.path().extension() != ".cfg") continue;
    CAPTURE(entry.path().string());
    const auto c = load_config(entry.path().string());
    CHECK_NOTHROW(c.validate());
    CHECK(parse_config(emit_config(c)) == c);
    ++count;
  }
  CHECK(count >= 4);
}
