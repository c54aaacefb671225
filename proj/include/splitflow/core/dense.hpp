#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <utility>
#include <vector>

#include "splitflow/core/error.hpp"

namespace splitflow {

/// Row-major dense matrix.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(int rows, int cols, double fill = 0.0)
      : rows_(rows), cols_(cols), a_(std::size_t(rows) * std::size_t(cols), fill) {}

  static DenseMatrix identity(int n, double scale = 1.0) {
    DenseMatrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = scale;
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  double& operator()(int r, int c) { return a_[std::size_t(r) * std::size_t(cols_) + std::size_t(c)]; }
  double operator()(int r, int c) const { return a_[std::size_t(r) * std::size_t(cols_) + std::size_t(c)]; }

  std::span<double> row(int r) { return {a_.data() + std::size_t(r) * std::size_t(cols_), std::size_t(cols_)}; }
  std::span<const double> row(int r) const {
    return {a_.data() + std::size_t(r) * std::size_t(cols_), std::size_t(cols_)};
  }

  std::vector<double>& data() { return a_; }
  const std::vector<double>& data() const { return a_; }

  void resize(int rows, int cols) {
    rows_ = rows;
    cols_ = cols;
    a_.assign(std::size_t(rows) * std::size_t(cols), 0.0);
  }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> a_;
};

/// y += alpha * M x
inline void gemv_add(const DenseMatrix& m, std::span<const double> x, std::span<double> y, double alpha = 1.0) {
  const int n = m.cols();
  for (int r = 0; r < m.rows(); ++r) {
    const double* row = m.data().data() + std::size_t(r) * std::size_t(n);
    double s = 0.0;
    for (int c = 0; c < n; ++c) s += row[c] * x[std::size_t(c)];
    y[std::size_t(r)] += alpha * s;
  }
}

inline DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
  DenseMatrix c(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (int j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

/// LU factorization with partial (row) pivoting of a square matrix.
class LuFactor {
 public:
  static constexpr double kPivotFloor = 1e-300;

  LuFactor() = default;
  explicit LuFactor(DenseMatrix m) : lu_(std::move(m)), perm_(std::size_t(lu_.rows())) {
    const int n = lu_.rows();
    for (int i = 0; i < n; ++i) perm_[std::size_t(i)] = i;
    for (int col = 0; col < n; ++col) {
      int piv = col;
      double best = std::abs(lu_(col, col));
      for (int r = col + 1; r < n; ++r) {
        if (std::abs(lu_(r, col)) > best) {
          best = std::abs(lu_(r, col));
          piv = r;
        }
      }
      if (!(best > kPivotFloor)) throw SingularDiagonal("singular diagonal block in LU factorization");
      if (piv != col) {
        std::swap_ranges(lu_.row(col).begin(), lu_.row(col).end(), lu_.row(piv).begin());
        std::swap(perm_[std::size_t(col)], perm_[std::size_t(piv)]);
      }
      const double inv = 1.0 / lu_(col, col);
      for (int r = col + 1; r < n; ++r) {
        const double f = lu_(r, col) * inv;
        lu_(r, col) = f;
        if (f == 0.0) continue;
        for (int c = col + 1; c < n; ++c) lu_(r, c) -= f * lu_(col, c);
      }
    }
  }

  int size() const { return lu_.rows(); }

  /// Overwrites b with M^{-1} b. `work` must hold size() entries.
  void solve(std::span<double> b, std::span<double> work) const {
    const int n = lu_.rows();
    for (int i = 0; i < n; ++i) work[std::size_t(i)] = b[std::size_t(perm_[std::size_t(i)])];
    for (int i = 0; i < n; ++i) {
      double s = work[std::size_t(i)];
      for (int c = 0; c < i; ++c) s -= lu_(i, c) * work[std::size_t(c)];
      work[std::size_t(i)] = s;
    }
    for (int i = n - 1; i >= 0; --i) {
      double s = work[std::size_t(i)];
      for (int c = i + 1; c < n; ++c) s -= lu_(i, c) * work[std::size_t(c)];
      work[std::size_t(i)] = s / lu_(i, i);
    }
    std::copy(work.begin(), work.begin() + n, b.begin());
  }

  void solve(std::span<double> b) const {
    std::vector<double> work(static_cast<std::size_t>(size()));
    solve(b, work);
  }

 private:
  DenseMatrix lu_;
  std::vector<int> perm_;
};

}  // namespace splitflow
