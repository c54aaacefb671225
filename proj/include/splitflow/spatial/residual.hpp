#pragma once

// Finite-volume residual R = sum over faces of (convective + viscous) flux
// through the outward area vector, minus V * source. The semi-discrete
// system is dQ/dt = -R / V.

#include <array>
#include <span>
#include <vector>

#include "splitflow/chemistry/mechanism.hpp"
#include "splitflow/core/parallel.hpp"
#include "splitflow/grid/boundary.hpp"
#include "splitflow/spatial/flux.hpp"
#include "splitflow/spatial/reconstruction.hpp"
#include "splitflow/spatial/viscous.hpp"

namespace splitflow {

struct ResidualOptions {
  Reconstruction reconstruction = Reconstruction::muscl;
  bool viscous = true;
  int threads = 1;
};

/// Number of faces normal to direction d, and their (i, j, k) decoding.
inline std::size_t face_count(const Extents& ext, int d) {
  return std::size_t(ext.ni + (d == 0)) * std::size_t(ext.nj + (d == 1)) * std::size_t(ext.nk + (d == 2));
}

inline Index3 face_from_flat(const Extents& ext, int d, std::size_t f) {
  const int ni = ext.ni + (d == 0), nj = ext.nj + (d == 1);
  Index3 c;
  c.i = int(f % std::size_t(ni));
  f /= std::size_t(ni);
  c.j = int(f % std::size_t(nj));
  c.k = int(f / std::size_t(nj));
  return c;
}

inline std::size_t face_flat(const Extents& ext, int d, const Index3& c) {
  const int ni = ext.ni + (d == 0), nj = ext.nj + (d == 1);
  return std::size_t(c.i) + std::size_t(ni) * (std::size_t(c.j) + std::size_t(nj) * std::size_t(c.k));
}

/// Velocity, temperature and mass-fraction gradients at the face on the low
/// side of cell `face` in direction d. Each gradient solves e_k . g = dphi_k
/// for one normal and two tangential covariant differences, so linear fields
/// are reproduced exactly. Boundary faces take tangential differences from
/// the interior cell only; inactive directions contribute a zero derivative.
inline void face_gradients(const FlowField& field, const StructuredGrid& grid, int d, const Index3& face,
                           FaceGradients& g) {
  const Extents& ext = field.extents();
  const Index3 L = shifted(face, d, -1);
  const Index3& R = face;
  const bool lo_bnd = face[d] == 0, hi_bnd = face[d] == ext[d];
  const Index3& inner = lo_bnd ? R : L;
  const int ns = int(field.primitive(R).Y.size());

  std::array<Vec3, 3> e;
  std::array<std::array<const CellPrimitive*, 4>, 3> stencil{};  // (plus, minus) pairs per row
  std::array<int, 3> pairs{1, 0, 0};
  e[0] = grid.centroid(R) - grid.centroid(L);
  stencil[0] = {&field.primitive(R), &field.primitive(L), nullptr, nullptr};
  for (int k = 1; k < 3; ++k) {
    const int t = (d + k) % 3;
    if (!ext.active(t)) {
      const Vec3 a = grid.cell_area(t, inner);
      e[std::size_t(k)] = a * (1.0 / norm(a));
      pairs[std::size_t(k)] = 0;
      continue;
    }
    Vec3 sum{};
    int n = 0;
    for (const Index3* c : {&L, &R}) {
      if ((c == &L && lo_bnd) || (c == &R && hi_bnd)) continue;
      const Index3 p = shifted(*c, t, 1), m = shifted(*c, t, -1);
      sum += 0.5 * (grid.centroid(p) - grid.centroid(m));
      stencil[std::size_t(k)][std::size_t(2 * n)] = &field.primitive(p);
      stencil[std::size_t(k)][std::size_t(2 * n + 1)] = &field.primitive(m);
      ++n;
    }
    e[std::size_t(k)] = sum * (1.0 / n);
    pairs[std::size_t(k)] = n;
  }

  const Vec3 c12 = cross(e[1], e[2]), c20 = cross(e[2], e[0]), c01 = cross(e[0], e[1]);
  const double inv_det = 1.0 / dot(e[0], c12);
  const std::array<Vec3, 3> w{c12 * inv_det, c20 * inv_det, c01 * inv_det};

  auto gradient = [&](auto&& value) {
    Vec3 out{};
    for (std::size_t k = 0; k < 3; ++k) {
      const int n = pairs[k];
      if (n == 0) continue;
      double diff = 0.0;
      for (int q = 0; q < n; ++q)
        diff += value(*stencil[k][std::size_t(2 * q)]) - value(*stencil[k][std::size_t(2 * q + 1)]);
      if (k > 0) diff *= 0.5 / n;
      out += diff * w[k];
    }
    return out;
  };

  for (int i = 0; i < 3; ++i) g.grad_u[std::size_t(i)] = gradient([i](const CellPrimitive& p) { return p.u[i]; });
  g.grad_T = gradient([](const CellPrimitive& p) { return p.T; });
  g.grad_Y.resize(std::size_t(ns));
  for (int s = 0; s < ns; ++s)
    g.grad_Y[std::size_t(s)] = gradient([s](const CellPrimitive& p) { return p.Y[std::size_t(s)]; });
}

/// Arithmetic face average of (rho, u, T, Y) with derived quantities recomputed.
inline void face_average(const CellPrimitive& a, const CellPrimitive& b, const MixtureModel& model, CellPrimitive& out) {
  out.rho = 0.5 * (a.rho + b.rho);
  out.u = 0.5 * (a.u + b.u);
  out.T = 0.5 * (a.T + b.T);
  out.Y.resize(a.Y.size());
  for (std::size_t s = 0; s < a.Y.size(); ++s) out.Y[s] = 0.5 * (a.Y[s] + b.Y[s]);
  complete_from_temperature(out, model);
}

class ResidualAssembler {
 public:
  ResidualAssembler(const MixtureModel& model, const Mechanism& mech, ResidualOptions opts = {})
      : model_(&model), mech_(&mech), opts_(opts) {}

  const ResidualOptions& options() const { return opts_; }

  /// Requires ghost cells to be filled. Writes R for every interior cell.
  void assemble(const FlowField& field, const StructuredGrid& grid, const BoundarySet& bcs, CellVector& R) {
    const Extents& ext = field.extents();
    const int nv = model_->nv();
    for (int d = 0; d < 3; ++d) {
      auto& F = face_flux_[std::size_t(d)];
      if (!ext.active(d)) {
        F.clear();
        continue;
      }
      const std::size_t nf = face_count(ext, d);
      F.assign(nf * std::size_t(nv), 0.0);
      parallel_for(nf, opts_.threads, [&](std::size_t b, std::size_t e) {
        Scratch s(*model_);
        for (std::size_t f = b; f < e; ++f)
          face_flux(field, grid, bcs, d, face_from_flat(ext, d, f), s, {F.data() + f * std::size_t(nv), std::size_t(nv)});
      });
    }

    if (R.cells() != ext.cells() || R.nv() != nv) R = CellVector(ext.cells(), nv);
    const PaddedLayout& lay = field.layout();
    parallel_for(ext.cells(), opts_.threads, [&](std::size_t b, std::size_t e) {
      std::vector<double> omega(std::size_t(model_->ns()));
      for (std::size_t idx = b; idx < e; ++idx) {
        const Index3 c = lay.unflatten(idx);
        auto r = R[idx];
        std::fill(r.begin(), r.end(), 0.0);
        for (int d = 0; d < 3; ++d) {
          if (!ext.active(d)) continue;
          const auto& F = face_flux_[std::size_t(d)];
          const double* lo = F.data() + face_flat(ext, d, c) * std::size_t(nv);
          const double* hi = F.data() + face_flat(ext, d, shifted(c, d, 1)) * std::size_t(nv);
          for (int v = 0; v < nv; ++v) r[std::size_t(v)] += hi[v] - lo[v];
        }
        if (mech_->active()) {
          production_rates(field.primitive(c), *mech_, *model_, omega);
          const double V = grid.volume(c);
          for (int s = 0; s < model_->ns(); ++s) r[std::size_t(var::species + s)] -= V * omega[std::size_t(s)];
        }
      }
    });
  }

 private:
  struct Scratch {
    explicit Scratch(const MixtureModel& model) : rusanov(model), visc(std::size_t(model.nv())) {}
    RusanovFlux rusanov;
    CellPrimitive left, right, face;
    FaceGradients grad;
    std::vector<double> visc;
    std::vector<Vec3> diffusion;
  };

  void face_flux(const FlowField& field, const StructuredGrid& grid, const BoundarySet& bcs, int d, const Index3& c,
                 Scratch& s, std::span<double> out) const {
    const Extents& ext = field.extents();
    const Vec3& S = grid.face_area(d, c);
    const Index3 L = shifted(c, d, -1);
    const bool lo_bnd = c[d] == 0, hi_bnd = c[d] == ext[d];
    const bool wall = (lo_bnd && bcs.at(2 * d).kind == BcKind::noslip_isothermal) ||
                      (hi_bnd && bcs.at(2 * d + 1).kind == BcKind::noslip_isothermal);
    const CellPrimitive& pl = field.primitive(L);
    const CellPrimitive& pr = field.primitive(c);

    if (wall) {
      const double p = lo_bnd ? pr.p : pl.p;
      std::fill(out.begin(), out.end(), 0.0);
      for (int i = 0; i < 3; ++i) out[std::size_t(var::mom + i)] = p * S[i];
    } else if (opts_.reconstruction == Reconstruction::muscl) {
      muscl_reconstruct(field.primitive(shifted(c, d, -2)), pl, pr, field.primitive(shifted(c, d, 1)), *model_, s.left,
                        s.right);
      s.rusanov(s.left, s.right, S, out);
    } else {
      s.rusanov(pl, pr, S, out);
    }

    if (opts_.viscous) {
      face_gradients(field, grid, d, c, s.grad);
      face_average(pl, pr, *model_, s.face);
      viscous_flux(s.face, s.grad, S, *model_, s.visc, s.diffusion);
      for (std::size_t v = 0; v < out.size(); ++v) out[v] += s.visc[v];
    }
  }

  const MixtureModel* model_;
  const Mechanism* mech_;
  ResidualOptions opts_;
  std::array<std::vector<double>, 3> face_flux_;
};

inline CellVector assemble_residual(const FlowField& field, const StructuredGrid& grid, const BoundarySet& bcs,
                                    const Mechanism& mech, const MixtureModel& model, ResidualOptions opts = {}) {
  CellVector R;
  ResidualAssembler(model, mech, opts).assemble(field, grid, bcs, R);
  return R;
}

}  // namespace splitflow
