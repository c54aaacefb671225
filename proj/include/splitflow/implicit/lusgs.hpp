#pragma once

// LU-SGS: (D + L) D^-1 (D + U) dQ = RHS, solved by a forward sweep
// (D + L) dQ* = RHS and a backward sweep (D + U) dQ = D dQ*. Cells are
// visited by (i + j + k) hyperplanes; cells within a hyperplane are
// independent. Couplings to ghost cells are dropped (explicit boundaries).

#include <span>
#include <vector>

#include "splitflow/core/parallel.hpp"
#include "splitflow/core/types.hpp"

namespace splitflow {

/// Interior cells grouped by hyperplane i + j + k.
class SweepOrder {
 public:
  SweepOrder() = default;
  explicit SweepOrder(Extents ext) : ext_(ext), layout_(ext) {
    const int planes = ext.ni + ext.nj + ext.nk - 2;
    offsets_.assign(std::size_t(planes + 1), 0);
    for_each_interior(ext, [&](const Index3& c) { ++offsets_[std::size_t(c.i + c.j + c.k + 1)]; });
    for (std::size_t p = 1; p < offsets_.size(); ++p) offsets_[p] += offsets_[p - 1];
    cells_.resize(ext.cells());
    std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
    for_each_interior(ext, [&](const Index3& c) { cells_[fill[std::size_t(c.i + c.j + c.k)]++] = c; });
  }

  const Extents& extents() const { return ext_; }
  const PaddedLayout& layout() const { return layout_; }
  int planes() const { return int(offsets_.size()) - 1; }
  std::span<const Index3> plane(int p) const {
    return {cells_.data() + offsets_[std::size_t(p)], offsets_[std::size_t(p + 1)] - offsets_[std::size_t(p)]};
  }

 private:
  Extents ext_{};
  PaddedLayout layout_{};
  std::vector<std::size_t> offsets_;
  std::vector<Index3> cells_;
};

template <class Op>
void lusgs_solve(const Op& op, const SweepOrder& order, const CellVector& rhs, CellVector& dq, int threads = 1) {
  const Extents& ext = order.extents();
  const PaddedLayout& lay = order.layout();
  const int nv = op.nv();
  if (dq.cells() != ext.cells() || dq.nv() != nv) dq = CellVector(ext.cells(), nv);

  auto run_plane = [&](int p, bool forward) {
    const auto cells = order.plane(p);
    parallel_for(cells.size(), threads, [&](std::size_t b, std::size_t e) {
      auto ws = op.workspace();
      std::vector<double> acc(static_cast<std::size_t>(nv));
      for (std::size_t n = b; n < e; ++n) {
        const Index3& c = cells[n];
        const std::size_t idx = lay.interior(c);
        auto x = dq[idx];
        std::fill(acc.begin(), acc.end(), 0.0);
        for (int d = 0; d < 3; ++d) {
          if (!ext.active(d)) continue;
          if (forward && c[d] > 0) op.add_lower(ws, c, d, dq[lay.interior(shifted(c, d, -1))], acc);
          if (!forward && c[d] + 1 < ext[d]) op.add_upper(ws, c, d, dq[lay.interior(shifted(c, d, 1))], acc);
        }
        if (forward) {
          const auto r = rhs[idx];
          for (int v = 0; v < nv; ++v) x[std::size_t(v)] = r[std::size_t(v)] - acc[std::size_t(v)];
          op.solve_diagonal(ws, idx, x);
        } else {
          op.solve_diagonal(ws, idx, acc);
          for (int v = 0; v < nv; ++v) x[std::size_t(v)] -= acc[std::size_t(v)];
        }
      }
    });
  };

  for (int p = 0; p < order.planes(); ++p) run_plane(p, true);
  for (int p = order.planes() - 1; p >= 0; --p) run_plane(p, false);
}

template <class Op>
CellVector lusgs_solve(const Op& op, const Extents& ext, const CellVector& rhs) {
  CellVector dq;
  lusgs_solve(op, SweepOrder(ext), rhs, dq);
  return dq;
}

}  // namespace splitflow
