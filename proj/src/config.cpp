#include "escher/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <vector>

#include "escher/error.hpp"

namespace escher {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

struct ParseFailure {
  std::string what;
};

double parse_double(std::string_view v) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) throw ParseFailure{"expected a number"};
  return out;
}

template <typename Int>
Int parse_integer(std::string_view v) {
  Int out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) throw ParseFailure{"expected an integer"};
  return out;
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::string_view to_string(LinearSolverKind kind) {
  return kind == LinearSolverKind::SparseLu ? "lu" : "bicgstab";
}

std::string_view to_string(InitialProjection p) {
  return p == InitialProjection::Interpolate ? "interpolate" : "ritz";
}

struct Key {
  std::string name;
  std::function<void(RunConfig&, std::string_view)> set;
  std::function<std::string(const RunConfig&)> get;
};

template <typename T>
Key real_key(std::string name, T RunConfig::*field) {
  return {std::move(name),
          [field](RunConfig& c, std::string_view v) { c.*field = parse_double(v); },
          [field](const RunConfig& c) { return format_double(c.*field); }};
}

template <typename T>
Key int_key(std::string name, T RunConfig::*field) {
  return {std::move(name),
          [field](RunConfig& c, std::string_view v) { c.*field = parse_integer<T>(v); },
          [field](const RunConfig& c) { return std::to_string(c.*field); }};
}

Key string_key(std::string name, std::string RunConfig::*field) {
  return {std::move(name), [field](RunConfig& c, std::string_view v) { c.*field = v; },
          [field](const RunConfig& c) { return c.*field; }};
}

const std::vector<Key>& keys() {
  static const std::vector<Key> table = {
      {"surface",
       [](RunConfig& c, std::string_view v) {
         const auto kind = surface_kind_from_string(v);
         if (!kind) throw ParseFailure{"unknown surface '" + std::string(v) + "'"};
         c.surface = *kind;
       },
       [](const RunConfig& c) { return std::string(to_string(c.surface)); }},
      real_key("surface.radius", &RunConfig::surface_radius),
      int_key("mesh.subdivisions", &RunConfig::subdivisions),
      int_key("mesh.n_major", &RunConfig::n_major),
      int_key("mesh.n_minor", &RunConfig::n_minor),
      real_key("epsilon", &RunConfig::epsilon),
      real_key("theta", &RunConfig::theta),
      string_key("potential", &RunConfig::potential),
      real_key("tau", &RunConfig::tau),
      real_key("final_time", &RunConfig::final_time),
      {"scheme",
       [](RunConfig& c, std::string_view v) {
         const auto kind = scheme_kind_from_string(v);
         if (!kind) throw ParseFailure{"unknown scheme '" + std::string(v) + "'"};
         c.scheme = *kind;
       },
       [](const RunConfig& c) { return std::string(to_string(c.scheme)); }},
      string_key("initial.data", &RunConfig::initial_data),
      real_key("initial.constant", &RunConfig::initial_constant),
      {"initial.projection",
       [](RunConfig& c, std::string_view v) {
         if (v == "interpolate") {
           c.initial_projection = InitialProjection::Interpolate;
         } else if (v == "ritz") {
           c.initial_projection = InitialProjection::Ritz;
         } else {
           throw ParseFailure{"expected 'interpolate' or 'ritz'"};
         }
       },
       [](const RunConfig& c) { return std::string(to_string(c.initial_projection)); }},
      real_key("solver.newton_tol", &RunConfig::newton_tol),
      int_key("solver.newton_max_iter", &RunConfig::newton_max_iter),
      {"solver.linear",
       [](RunConfig& c, std::string_view v) {
         if (v == "lu") {
           c.linear_solver = LinearSolverKind::SparseLu;
         } else if (v == "bicgstab") {
           c.linear_solver = LinearSolverKind::BiCgStab;
         } else {
           throw ParseFailure{"expected 'lu' or 'bicgstab'"};
         }
       },
       [](const RunConfig& c) { return std::string(to_string(c.linear_solver)); }},
      string_key("output.directory", &RunConfig::output_directory),
      int_key("output.snapshot_every", &RunConfig::snapshot_every),
      int_key("eoc.levels", &RunConfig::eoc_levels),
      int_key("eoc.coarse_steps", &RunConfig::eoc_coarse_steps),
      int_key("eoc.reference_steps", &RunConfig::eoc_reference_steps),
      int_key("seed", &RunConfig::seed),
  };
  return table;
}

[[noreturn]] void invalid(const std::string& field, const std::string& why) {
  throw Error(ErrorCode::ValidationError, field + ": " + why);
}

}  // namespace

SchemeConfig RunConfig::scheme_config() const {
  SchemeConfig s;
  s.epsilon = epsilon;
  s.tau = tau;
  s.final_time = final_time;
  s.scheme = scheme;
  s.newton_tol = newton_tol;
  s.newton_max_iter = newton_max_iter;
  s.linear_solver = linear_solver;
  s.snapshot_every = snapshot_every;
  return s;
}

Potential RunConfig::make_potential() const {
  Potential p = Potential::from_name(potential);
  p.theta = theta;
  return p;
}

LevelSetSurface RunConfig::make_surface() const {
  if (surface == SurfaceKind::StaticSphere) return LevelSetSurface::static_sphere(surface_radius);
  return LevelSetSurface(surface, SurfaceParameters{});
}

InitialData RunConfig::make_initial_data() const {
  return initial_data_from_name(initial_data, initial_constant);
}

SurfaceMesh RunConfig::make_mesh() const {
  const auto s = make_surface();
  if (s.is_sphere()) return build_icosphere(s, subdivisions, 0.0);
  return build_torus_mesh(s, n_major, n_minor, 0.0);
}

EocStudyConfig RunConfig::eoc_config() const {
  EocStudyConfig e;
  e.scheme = scheme_config();
  e.potential = make_potential();
  e.initial = make_initial_data();
  e.ritz_initial_data = initial_projection == InitialProjection::Ritz;
  e.levels = eoc_levels;
  e.coarse_steps = eoc_coarse_steps;
  e.reference_steps = eoc_reference_steps;
  return e;
}

void RunConfig::validate() const {
  auto positive = [](double v) { return v > 0.0 && std::isfinite(v); };
  if (!positive(surface_radius)) invalid("surface.radius", "must be positive");
  if (subdivisions < 0 || subdivisions > 9) invalid("mesh.subdivisions", "must be in [0, 9]");
  if (n_major < 3) invalid("mesh.n_major", "must be at least 3");
  if (n_minor < 3) invalid("mesh.n_minor", "must be at least 3");
  if (!positive(epsilon)) invalid("epsilon", "must be positive");
  if (!(theta >= 0.0) || !std::isfinite(theta)) invalid("theta", "must be non-negative");
  if (potential != "quartic") invalid("potential", "unknown potential '" + potential + "'");
  if (!positive(tau)) invalid("tau", "must be positive");
  if (!(final_time >= 0.0) || !std::isfinite(final_time)) {
    invalid("final_time", "must be non-negative");
  }
  if (final_time > 0.0 && tau > final_time) invalid("tau", "exceeds final_time");
  if (initial_data != "sphere_eoc" && initial_data != "torus" && initial_data != "constant") {
    invalid("initial.data", "unknown initial data '" + initial_data + "'");
  }
  if (!std::isfinite(initial_constant)) invalid("initial.constant", "must be finite");
  if (!positive(newton_tol)) invalid("solver.newton_tol", "must be positive");
  if (newton_max_iter < 1) invalid("solver.newton_max_iter", "must be at least 1");
  if (output_directory.empty()) invalid("output.directory", "must not be empty");
  if (snapshot_every < 0) invalid("output.snapshot_every", "must be non-negative");
  if (eoc_levels < 2) invalid("eoc.levels", "must be at least 2");
  if (eoc_coarse_steps < 1) invalid("eoc.coarse_steps", "must be at least 1");
  if (eoc_reference_steps < 0) invalid("eoc.reference_steps", "must be non-negative");
  scheme_config().validate();
}

RunConfig parse_config(std::string_view text) {
  RunConfig config;
  std::set<std::string> seen;
  int line_number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_number;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;

    auto parse_error = [line_number](const std::string& what) {
      return Error(ErrorCode::ParseError, "line " + std::to_string(line_number) + ": " + what);
    };
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw parse_error("expected 'key = value'");
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    if (key.empty()) throw parse_error("missing key");
    if (value.empty()) throw parse_error("missing value for '" + key + "'");

    const auto& table = keys();
    const auto it = std::find_if(table.begin(), table.end(),
                                 [&](const Key& k) { return k.name == key; });
    if (it == table.end()) throw parse_error("unknown key '" + key + "'");
    if (!seen.insert(key).second) throw parse_error("repeated key '" + key + "'");
    try {
      it->set(config, value);
    } catch (const ParseFailure& f) {
      throw parse_error(key + ": " + f.what);
    }
  }
  for (const char* required : {"surface", "tau", "final_time"}) {
    if (!seen.count(required)) {
      throw Error(ErrorCode::ValidationError,
                  std::string(required) + ": required key is missing");
    }
  }
  config.validate();
  return config;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot read config file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string emit_config(const RunConfig& config) {
  std::ostringstream os;
  for (const auto& key : keys()) os << key.name << " = " << key.get(config) << '\n';
  return os.str();
}

}  // namespace escher
