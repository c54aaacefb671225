#pragma once

#include <algorithm>
#include <array>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "splitflow/core/error.hpp"

namespace splitflow {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double& operator[](int d) { return d == 0 ? x : (d == 1 ? y : z); }
  double operator[](int d) const { return d == 0 ? x : (d == 1 ? y : z); }

  Vec3& operator+=(const Vec3& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  Vec3& operator-=(const Vec3& o) {
    x -= o.x;
    y -= o.y;
    z -= o.z;
    return *this;
  }
  Vec3& operator*=(double s) {
    x *= s;
    y *= s;
    z *= s;
    return *this;
  }
  friend bool operator==(const Vec3&, const Vec3&) = default;
};

inline Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
inline Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
inline Vec3 operator-(const Vec3& a) { return {-a.x, -a.y, -a.z}; }
inline Vec3 operator*(Vec3 a, double s) { return a *= s; }
inline Vec3 operator*(double s, Vec3 a) { return a *= s; }
inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

/// Ghost-layer depth on every side of the block (enough for MUSCL stencils).
inline constexpr int kGhost = 2;

/// Cell counts per index direction. A direction with a single cell is
/// inactive: it carries no fluxes and no implicit coupling.
struct Extents {
  int ni = 1;
  int nj = 1;
  int nk = 1;

  int operator[](int d) const { return d == 0 ? ni : (d == 1 ? nj : nk); }
  bool active(int d) const { return (*this)[d] > 1; }
  std::size_t cells() const { return std::size_t(ni) * std::size_t(nj) * std::size_t(nk); }
  int active_dims() const { return int(active(0)) + int(active(1)) + int(active(2)); }
  friend bool operator==(const Extents&, const Extents&) = default;
};

struct Index3 {
  int i = 0;
  int j = 0;
  int k = 0;

  int& operator[](int d) { return d == 0 ? i : (d == 1 ? j : k); }
  int operator[](int d) const { return d == 0 ? i : (d == 1 ? j : k); }
  friend bool operator==(const Index3&, const Index3&) = default;
};

inline Index3 shifted(Index3 c, int d, int by) {
  c[d] += by;
  return c;
}

/// Index arithmetic for a block padded by kGhost layers on every side.
class PaddedLayout {
 public:
  PaddedLayout() = default;
  explicit PaddedLayout(Extents ext)
      : ext_(ext), pi_(ext.ni + 2 * kGhost), pj_(ext.nj + 2 * kGhost), pk_(ext.nk + 2 * kGhost) {}

  const Extents& extents() const { return ext_; }
  std::size_t padded_cells() const { return std::size_t(pi_) * std::size_t(pj_) * std::size_t(pk_); }

  /// Flat padded index; (i, j, k) may range over [-kGhost, n + kGhost).
  std::size_t padded(int i, int j, int k) const {
    assert(i >= -kGhost && i < ext_.ni + kGhost);
    assert(j >= -kGhost && j < ext_.nj + kGhost);
    assert(k >= -kGhost && k < ext_.nk + kGhost);
    return std::size_t(i + kGhost) + std::size_t(pi_) * (std::size_t(j + kGhost) + std::size_t(pj_) * std::size_t(k + kGhost));
  }
  std::size_t padded(const Index3& c) const { return padded(c.i, c.j, c.k); }

  /// Flat interior index in [0, cells()).
  std::size_t interior(int i, int j, int k) const {
    return std::size_t(i) + std::size_t(ext_.ni) * (std::size_t(j) + std::size_t(ext_.nj) * std::size_t(k));
  }
  std::size_t interior(const Index3& c) const { return interior(c.i, c.j, c.k); }

  Index3 unflatten(std::size_t idx) const {
    Index3 c;
    c.i = int(idx % std::size_t(ext_.ni));
    idx /= std::size_t(ext_.ni);
    c.j = int(idx % std::size_t(ext_.nj));
    c.k = int(idx / std::size_t(ext_.nj));
    return c;
  }

  bool is_interior(const Index3& c) const {
    return c.i >= 0 && c.i < ext_.ni && c.j >= 0 && c.j < ext_.nj && c.k >= 0 && c.k < ext_.nk;
  }

 private:
  Extents ext_{};
  int pi_ = 0;
  int pj_ = 0;
  int pk_ = 0;
};

/// nv doubles per cell over the padded block, contiguous per cell.
class CellField {
 public:
  CellField() = default;
  CellField(Extents ext, int nv, double fill = 0.0)
      : layout_(ext), nv_(nv), data_(layout_.padded_cells() * std::size_t(nv), fill) {}

  const PaddedLayout& layout() const { return layout_; }
  const Extents& extents() const { return layout_.extents(); }
  int nv() const { return nv_; }

  std::span<double> operator()(int i, int j, int k) {
    return {data_.data() + layout_.padded(i, j, k) * std::size_t(nv_), std::size_t(nv_)};
  }
  std::span<const double> operator()(int i, int j, int k) const {
    return {data_.data() + layout_.padded(i, j, k) * std::size_t(nv_), std::size_t(nv_)};
  }
  std::span<double> operator()(const Index3& c) { return (*this)(c.i, c.j, c.k); }
  std::span<const double> operator()(const Index3& c) const { return (*this)(c.i, c.j, c.k); }

  std::vector<double>& raw() { return data_; }
  const std::vector<double>& raw() const { return data_; }

  void fill(double v) { std::fill(data_.begin(), data_.end(), v); }

 private:
  PaddedLayout layout_{};
  int nv_ = 0;
  std::vector<double> data_;
};

/// nv doubles per interior cell, indexed by the flat interior index.
class CellVector {
 public:
  CellVector() = default;
  CellVector(std::size_t cells, int nv, double fill = 0.0) : cells_(cells), nv_(nv), data_(cells * std::size_t(nv), fill) {}

  std::size_t cells() const { return cells_; }
  int nv() const { return nv_; }

  std::span<double> operator[](std::size_t c) { return {data_.data() + c * std::size_t(nv_), std::size_t(nv_)}; }
  std::span<const double> operator[](std::size_t c) const {
    return {data_.data() + c * std::size_t(nv_), std::size_t(nv_)};
  }

  std::vector<double>& raw() { return data_; }
  const std::vector<double>& raw() const { return data_; }
  void fill(double v) { std::fill(data_.begin(), data_.end(), v); }

 private:
  std::size_t cells_ = 0;
  int nv_ = 0;
  std::vector<double> data_;
};

/// Calls f(Index3) over interior cells in (k, j, i) lexicographic order.
template <class F>
void for_each_interior(const Extents& ext, F&& f) {
  for (int k = 0; k < ext.nk; ++k)
    for (int j = 0; j < ext.nj; ++j)
      for (int i = 0; i < ext.ni; ++i) f(Index3{i, j, k});
}

}  // namespace splitflow
