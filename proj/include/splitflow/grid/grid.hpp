#pragma once

// Structured curvilinear grids. Face-area vectors play the role of the
// scaled contravariant metrics (grad xi / J); cell volumes are 1 / J.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "splitflow/core/error.hpp"
#include "splitflow/core/types.hpp"

namespace splitflow {

class StructuredGrid {
 public:
  StructuredGrid() = default;

  const Extents& extents() const { return ext_; }
  const PaddedLayout& layout() const { return layout_; }

  const Vec3& node(int i, int j, int k) const { return nodes_[node_index(i, j, k)]; }
  const std::vector<Vec3>& nodes() const { return nodes_; }

  double volume(const Index3& c) const { return volume_[layout_.interior(c)]; }
  /// Inverse cell volume.
  double jacobian(const Index3& c) const { return 1.0 / volume(c); }

  /// Area vector of the face on the low side of cell c in direction d,
  /// oriented toward increasing index. c[d] may equal n_d (the last face).
  const Vec3& face_area(int d, const Index3& c) const { return face_area_[std::size_t(d)][face_index(d, c)]; }
  const Vec3& face_center(int d, const Index3& c) const { return face_center_[std::size_t(d)][face_index(d, c)]; }

  /// Cell centroid; defined on ghost cells (by reflection through the
  /// boundary face center) as well as interior cells.
  const Vec3& centroid(const Index3& c) const { return centroid_[layout_.padded(c)]; }

  /// Mean of the two face-area vectors of cell c in direction d.
  Vec3 cell_area(int d, const Index3& c) const {
    return 0.5 * (face_area(d, c) + face_area(d, shifted(c, d, 1)));
  }

  /// Covariant edge vector of cell c in direction d (high face center minus low).
  Vec3 cell_axis(int d, const Index3& c) const { return face_center(d, shifted(c, d, 1)) - face_center(d, c); }

  /// Largest face area magnitude of the cell.
  double max_face_area(const Index3& c) const {
    double a = 0.0;
    for (int d = 0; d < 3; ++d) a = std::max({a, norm(face_area(d, c)), norm(face_area(d, shifted(c, d, 1)))});
    return a;
  }

  std::size_t node_index(int i, int j, int k) const {
    return std::size_t(i) + std::size_t(ext_.ni + 1) * (std::size_t(j) + std::size_t(ext_.nj + 1) * std::size_t(k));
  }

  friend StructuredGrid compute_metrics(Extents, std::vector<Vec3>);

 private:
  std::size_t face_index(int d, const Index3& c) const {
    const int ni = ext_.ni + (d == 0), nj = ext_.nj + (d == 1);
    return std::size_t(c.i) + std::size_t(ni) * (std::size_t(c.j) + std::size_t(nj) * std::size_t(c.k));
  }

  Extents ext_{};
  PaddedLayout layout_{};
  std::vector<Vec3> nodes_;
  std::vector<double> volume_;
  std::array<std::vector<Vec3>, 3> face_area_;
  std::array<std::vector<Vec3>, 3> face_center_;
  std::vector<Vec3> centroid_;
};

/// Builds metrics from (ni+1)(nj+1)(nk+1) nodes stored i-fastest.
/// Throws BadDims on inconsistent sizes and DegenerateCell on non-positive
/// or vanishing volumes.
inline StructuredGrid compute_metrics(Extents cells, std::vector<Vec3> nodes) {
  if (cells.ni < 1 || cells.nj < 1 || cells.nk < 1) throw BadDims("cell counts must be positive");
  const std::size_t expect = std::size_t(cells.ni + 1) * std::size_t(cells.nj + 1) * std::size_t(cells.nk + 1);
  if (nodes.size() != expect) throw BadDims("node count does not match grid dimensions");

  StructuredGrid g;
  g.ext_ = cells;
  g.layout_ = PaddedLayout(cells);
  g.nodes_ = std::move(nodes);
  auto X = [&](int i, int j, int k) -> const Vec3& { return g.nodes_[g.node_index(i, j, k)]; };

  // Faces: quad corners in cyclic order such that 0.5 (c - a) x (d - b)
  // points toward increasing index.
  for (int d = 0; d < 3; ++d) {
    const int ni = cells.ni + (d == 0), nj = cells.nj + (d == 1), nk = cells.nk + (d == 2);
    auto& area = g.face_area_[std::size_t(d)];
    auto& center = g.face_center_[std::size_t(d)];
    area.resize(std::size_t(ni) * std::size_t(nj) * std::size_t(nk));
    center.resize(area.size());
    for (int k = 0; k < nk; ++k)
      for (int j = 0; j < nj; ++j)
        for (int i = 0; i < ni; ++i) {
          Vec3 a, b, c, e;
          if (d == 0) {
            a = X(i, j, k), b = X(i, j + 1, k), c = X(i, j + 1, k + 1), e = X(i, j, k + 1);
          } else if (d == 1) {
            a = X(i, j, k), b = X(i, j, k + 1), c = X(i + 1, j, k + 1), e = X(i + 1, j, k);
          } else {
            a = X(i, j, k), b = X(i + 1, j, k), c = X(i + 1, j + 1, k), e = X(i, j + 1, k);
          }
          const std::size_t f = std::size_t(i) + std::size_t(ni) * (std::size_t(j) + std::size_t(nj) * std::size_t(k));
          area[f] = 0.5 * cross(c - a, e - b);
          center[f] = 0.25 * (a + b + c + e);
        }
  }

  g.volume_.resize(cells.cells());
  g.centroid_.assign(g.layout_.padded_cells(), Vec3{});
  for_each_interior(cells, [&](const Index3& c) {
    Vec3 ref{};
    for (int dk = 0; dk < 2; ++dk)
      for (int dj = 0; dj < 2; ++dj)
        for (int di = 0; di < 2; ++di) ref += X(c.i + di, c.j + dj, c.k + dk);
    ref *= 0.125;
    double vol = 0.0;
    for (int d = 0; d < 3; ++d) {
      const Index3 hi = shifted(c, d, 1);
      vol += dot(g.face_center(d, hi) - ref, g.face_area(d, hi));
      vol -= dot(g.face_center(d, c) - ref, g.face_area(d, c));
    }
    vol /= 3.0;
    const std::size_t idx = g.layout_.interior(c);
    if (!(vol > 1e-30))
      throw DegenerateCell("degenerate or inverted cell (" + std::to_string(c.i) + ", " + std::to_string(c.j) + ", " +
                           std::to_string(c.k) + ")");
    g.volume_[idx] = vol;
    g.centroid_[g.layout_.padded(c)] = ref;
  });

  // Ghost centroids: reflect interior centroids through the boundary face center.
  for (int d = 0; d < 3; ++d) {
    const int n = cells[d];
    for (int k = 0; k < cells.nk; ++k)
      for (int j = 0; j < cells.nj; ++j)
        for (int i = 0; i < cells.ni; ++i) {
          const Index3 c{i, j, k};
          if (c[d] != 0) continue;
          for (int layer = 1; layer <= kGhost; ++layer) {
            const Index3 lo_src = shifted(c, d, std::min(layer - 1, n - 1));
            const Index3 lo_ghost = shifted(c, d, -layer);
            g.centroid_[g.layout_.padded(lo_ghost)] = 2.0 * g.face_center(d, c) - g.centroid(lo_src);
            Index3 top = c;
            top[d] = n - 1;
            const Index3 hi_face = shifted(top, d, 1);
            const Index3 hi_src = shifted(top, d, -std::min(layer - 1, n - 1));
            const Index3 hi_ghost = shifted(top, d, layer);
            g.centroid_[g.layout_.padded(hi_ghost)] = 2.0 * g.face_center(d, hi_face) - g.centroid(hi_src);
          }
        }
  }
  return g;
}

/// Uniform Cartesian box [0, extent] with the given cell counts.
inline std::vector<Vec3> generate_box(const Vec3& extent, Extents dims) {
  if (dims.ni < 1 || dims.nj < 1 || dims.nk < 1) throw BadDims("box needs at least one cell per direction");
  if (!(extent.x > 0.0 && extent.y > 0.0 && extent.z > 0.0)) throw BadDims("box extent must be positive");
  std::vector<Vec3> nodes;
  nodes.reserve(std::size_t(dims.ni + 1) * std::size_t(dims.nj + 1) * std::size_t(dims.nk + 1));
  for (int k = 0; k <= dims.nk; ++k)
    for (int j = 0; j <= dims.nj; ++j)
      for (int i = 0; i <= dims.ni; ++i)
        nodes.push_back({extent.x * i / dims.ni, extent.y * j / dims.nj, extent.z * k / dims.nk});
  return nodes;
}

struct CylinderSpec {
  double radius = 0.045;
  double outer_radius = 0.18;
  Extents dims{32, 32, 1};  // (circumferential, radial, span)
  double stretch_ratio = 1.0;  // geometric growth of radial spacing away from the wall
  double first_cell = 0.0;     // if > 0, overrides stretch_ratio
  double span = 1.0;           // extrusion length in z
};

/// Growth ratio r such that h (1 + r + ... + r^(n-1)) = length.
inline double stretch_ratio_for_first_cell(double length, int n, double h) {
  if (!(h > 0.0)) throw BadDims("first cell height must be positive");
  if (std::abs(h * n - length) <= 1e-12 * length) return 1.0;
  if (h * n > length) throw BadDims("first cell height too large for the radial extent");
  auto total = [&](double r) { return h * (std::pow(r, n) - 1.0) / (r - 1.0); };
  double lo = 1.0 + 1e-15, hi = 2.0;
  while (total(hi) < length) hi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (total(mid) < length ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

/// Half-cylinder O-grid facing the -x direction. i runs along the wall
/// from the lower shoulder (x = 0, y < 0) through the stagnation point to
/// the upper shoulder; j runs radially outward; k spans z.
inline std::vector<Vec3> generate_cylinder_ogrid(const CylinderSpec& spec) {
  const Extents& n = spec.dims;
  if (n.ni < 2 || n.nj < 2 || n.nk < 1) throw BadDims("cylinder grid needs at least 2 cells circumferentially and radially");
  if (!(spec.radius > 0.0) || !(spec.outer_radius > spec.radius)) throw BadDims("need 0 < radius < outer_radius");
  if (!(spec.span > 0.0)) throw BadDims("span must be positive");
  const double length = spec.outer_radius - spec.radius;
  double ratio = spec.stretch_ratio;
  if (spec.first_cell > 0.0) ratio = stretch_ratio_for_first_cell(length, n.nj, spec.first_cell);
  if (!(ratio > 0.0)) throw BadDims("stretch ratio must be positive");

  std::vector<double> r(std::size_t(n.nj + 1));
  double sum = 0.0, step = 1.0;
  for (int j = 0; j < n.nj; ++j) {
    sum += step;
    step *= ratio;
  }
  r[0] = spec.radius;
  step = length / sum;
  for (int j = 1; j <= n.nj; ++j) {
    r[std::size_t(j)] = r[std::size_t(j - 1)] + step;
    step *= ratio;
  }
  r[std::size_t(n.nj)] = spec.outer_radius;

  std::vector<Vec3> nodes;
  nodes.reserve(std::size_t(n.ni + 1) * std::size_t(n.nj + 1) * std::size_t(n.nk + 1));
  for (int k = 0; k <= n.nk; ++k)
    for (int j = 0; j <= n.nj; ++j)
      for (int i = 0; i <= n.ni; ++i) {
        const double phi = -0.5 * std::numbers::pi + std::numbers::pi * i / n.ni;
        const double rr = r[std::size_t(j)];
        nodes.push_back({-rr * std::cos(phi), rr * std::sin(phi), spec.span * k / n.nk});
      }
  return nodes;
}

}  // namespace splitflow
