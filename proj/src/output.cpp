#include "escher/output.hpp"

#include <fstream>
#include <iomanip>
#include <limits>
#include <locale>
#include <sstream>

#include "escher/error.hpp"

namespace escher {

namespace {

constexpr int kDigits = std::numeric_limits<double>::max_digits10;

std::ofstream open_for_writing(const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::IoError, "cannot open '" + path + "' for writing");
  out.imbue(std::locale::classic());
  out << std::setprecision(kDigits);
  return out;
}

void finish(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) fail(ErrorCode::IoError, "failed writing '" + path + "'");
}

}  // namespace

void write_vtk(std::ostream& out, const SurfaceMesh& mesh, std::span<const NamedArray> arrays,
               const std::string& title) {
  for (const auto& a : arrays) {
    if (a.values.size() != mesh.node_count()) {
      fail(ErrorCode::LengthMismatch, "point array '" + a.name + "' does not match node count");
    }
  }
  out << std::setprecision(kDigits);
  out << "# vtk DataFile Version 2.0\n" << title << "\nASCII\nDATASET POLYDATA\n";
  out << "POINTS " << mesh.node_count() << " double\n";
  for (const auto& p : mesh.nodes()) out << p.x << ' ' << p.y << ' ' << p.z << '\n';
  out << "POLYGONS " << mesh.triangle_count() << ' ' << 4 * mesh.triangle_count() << '\n';
  for (const auto& t : mesh.triangles()) out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  if (arrays.empty()) return;
  out << "POINT_DATA " << mesh.node_count() << '\n';
  for (const auto& a : arrays) {
    out << "SCALARS " << a.name << " double 1\nLOOKUP_TABLE default\n";
    for (double v : a.values) out << v << '\n';
  }
}

void write_vtk(const std::string& path, const SurfaceMesh& mesh,
               std::span<const NamedArray> arrays, const std::string& title) {
  auto out = open_for_writing(path);
  write_vtk(out, mesh, arrays, title);
  finish(out, path);
}

VtkPolyData read_vtk(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::IoError, "cannot open '" + path + "'");
  in.imbue(std::locale::classic());
  auto bad = [&](const std::string& what) {
    fail(ErrorCode::IoError, "malformed VTK file '" + path + "': " + what);
  };
  std::string line;
  std::getline(in, line);
  if (line.rfind("# vtk DataFile", 0) != 0) bad("missing header");
  std::getline(in, line);  // title
  std::getline(in, line);
  if (line != "ASCII") bad("not ASCII");

  VtkPolyData data;
  std::string word;
  std::size_t n_points = 0;
  while (in >> word) {
    if (word == "DATASET") {
      in >> word;
      if (word != "POLYDATA") bad("unsupported dataset " + word);
    } else if (word == "POINTS") {
      in >> n_points >> word;
      data.points.resize(n_points);
      for (auto& p : data.points) in >> p.x >> p.y >> p.z;
    } else if (word == "POLYGONS") {
      std::size_t n = 0, size = 0;
      in >> n >> size;
      data.triangles.resize(n);
      for (auto& t : data.triangles) {
        int k = 0;
        in >> k;
        if (k != 3) bad("non-triangle polygon");
        in >> t[0] >> t[1] >> t[2];
      }
    } else if (word == "POINT_DATA") {
      std::size_t n = 0;
      in >> n;
      if (n != n_points) bad("POINT_DATA count mismatch");
    } else if (word == "SCALARS") {
      std::string name, type, table, table_name;
      int components = 1;
      in >> name >> type >> components >> table >> table_name;
      if (components != 1 || table != "LOOKUP_TABLE") bad("unsupported SCALARS block");
      std::vector<double> values(n_points);
      for (auto& v : values) in >> v;
      data.point_data.emplace_back(name, std::move(values));
    } else {
      bad("unexpected token " + word);
    }
    if (!in) bad("truncated section " + word);
  }
  return data;
}

void write_diagnostics_csv(std::ostream& out, std::span<const DiagnosticRecord> records) {
  out << std::setprecision(kDigits);
  out << "step,time,energy,mass,area,h,newton_iters\n";
  for (const auto& r : records) {
    out << r.step << ',' << r.time << ',' << r.energy << ',' << r.mass << ',' << r.area << ','
        << r.h << ',' << r.newton_iterations << '\n';
  }
}

void write_diagnostics_csv(const std::string& path, std::span<const DiagnosticRecord> records) {
  auto out = open_for_writing(path);
  write_diagnostics_csv(out, records);
  finish(out, path);
}

void write_eoc_csv(std::ostream& out, const EocTable& table) {
  out << std::setprecision(kDigits);
  out << "h,error,eoc\n";
  for (const auto& row : table.rows) {
    out << row.h << ',' << row.error << ',';
    if (row.eoc) out << *row.eoc;
    out << '\n';
  }
}

void write_eoc_csv(const std::string& path, const EocTable& table) {
  auto out = open_for_writing(path);
  write_eoc_csv(out, table);
  finish(out, path);
}

}  // namespace escher
