#pragma once

#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "escher/diagnostics.hpp"
#include "escher/mesh.hpp"

namespace escher {

struct NamedArray {
  std::string name;
  std::span<const double> values;
};

/// Legacy VTK 2.0 ASCII POLYDATA: POINTS, POLYGONS and one SCALARS array per entry of
/// `arrays` (omitted entirely when empty). Values use 17 significant digits.
void write_vtk(std::ostream& out, const SurfaceMesh& mesh, std::span<const NamedArray> arrays,
               const std::string& title = "escher surface");
/// Throws IoError if the file cannot be written; LengthMismatch for wrong array lengths.
void write_vtk(const std::string& path, const SurfaceMesh& mesh,
               std::span<const NamedArray> arrays, const std::string& title = "escher surface");

/// Minimal reader for files produced by write_vtk.
struct VtkPolyData {
  std::vector<Vec3> points;
  std::vector<Triangle> triangles;
  std::vector<std::pair<std::string, std::vector<double>>> point_data;
};
VtkPolyData read_vtk(const std::string& path);

/// Columns: step,time,energy,mass,area,h,newton_iters
void write_diagnostics_csv(std::ostream& out, std::span<const DiagnosticRecord> records);
void write_diagnostics_csv(const std::string& path, std::span<const DiagnosticRecord> records);

/// Columns: h,error,eoc (eoc empty on the first row)
void write_eoc_csv(std::ostream& out, const EocTable& table);
void write_eoc_csv(const std::string& path, const EocTable& table);

}  // namespace escher
