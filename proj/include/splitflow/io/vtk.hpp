#pragma once

// Legacy ASCII VTK structured-grid snapshots. Points are cell centroids so
// every array holds cell values directly.

#include <cstdio>
#include <string>

#include "splitflow/grid/grid.hpp"
#include "splitflow/io/atomic_file.hpp"
#include "splitflow/spatial/field.hpp"

namespace splitflow {

inline std::string format_vtk(const FlowField& field, const StructuredGrid& grid, const MixtureModel& model,
                              const std::string& title = "splitflow solution") {
  const Extents& ext = field.extents();
  const std::size_t n = ext.cells();
  std::string out;
  out.reserve(n * std::size_t(80 + 24 * model.ns()));
  char buf[128];
  out += "# vtk DataFile Version 3.0\n" + title + "\nASCII\nDATASET STRUCTURED_GRID\n";
  std::snprintf(buf, sizeof buf, "DIMENSIONS %d %d %d\nPOINTS %zu double\n", ext.ni, ext.nj, ext.nk, n);
  out += buf;
  for_each_interior(ext, [&](const Index3& c) {
    const Vec3& x = grid.centroid(c);
    std::snprintf(buf, sizeof buf, "%.12e %.12e %.12e\n", x.x, x.y, x.z);
    out += buf;
  });
  std::snprintf(buf, sizeof buf, "POINT_DATA %zu\n", n);
  out += buf;
  auto scalar = [&](const std::string& name, auto&& value) {
    out += "SCALARS " + name + " double 1\nLOOKUP_TABLE default\n";
    for_each_interior(ext, [&](const Index3& c) {
      std::snprintf(buf, sizeof buf, "%.12e\n", value(field.primitive(c)));
      out += buf;
    });
  };
  scalar("rho", [](const CellPrimitive& w) { return w.rho; });
  scalar("p", [](const CellPrimitive& w) { return w.p; });
  scalar("T", [](const CellPrimitive& w) { return w.T; });
  for (int s = 0; s < model.ns(); ++s)
    scalar("Y_" + model.species(s).name, [s](const CellPrimitive& w) { return w.Y[std::size_t(s)]; });
  out += "VECTORS u double\n";
  for_each_interior(ext, [&](const Index3& c) {
    const Vec3& u = field.primitive(c).u;
    std::snprintf(buf, sizeof buf, "%.12e %.12e %.12e\n", u.x, u.y, u.z);
    out += buf;
  });
  return out;
}

inline void write_vtk(const std::string& path, const FlowField& field, const StructuredGrid& grid,
                      const MixtureModel& model) {
  write_file_atomic(path, format_vtk(field, grid, model));
}

}  // namespace splitflow
