#pragma once

// Implicit operators for the LU-SGS sweeps. Every operator exposes
//   Workspace workspace() const
//   void solve_diagonal(Workspace&, std::size_t cell, std::span<double> x) const   // x <- D^-1 x
//   void add_lower(Workspace&, const Index3& c, int d, std::span<const double> dq_nb, std::span<double> acc) const
//   void add_upper(Workspace&, const Index3& c, int d, std::span<const double> dq_nb, std::span<double> acc) const
// where add_lower accumulates the coupling to cell c - e_d and add_upper the
// coupling to c + e_d.

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "splitflow/chemistry/mechanism.hpp"
#include "splitflow/core/dense.hpp"
#include "splitflow/grid/grid.hpp"
#include "splitflow/implicit/correction.hpp"
#include "splitflow/implicit/jacobian.hpp"
#include "splitflow/implicit/time_step.hpp"
#include "splitflow/spatial/field.hpp"
#include "splitflow/spatial/flux.hpp"
#include "splitflow/spatial/residual.hpp"

namespace splitflow {

enum class SpeciesOffdiag { symmetrized, unhalved };

/// Inviscid radius of the split species equations: |U| (convective), or
/// |U| + c|S| (matched), which equals the dissipation coefficient the
/// Rusanov flux applies to the species rows.
enum class SpeciesRadius { convective, matched };

/// Cell- and face-level spectral radii (face-flux units, m^3/s) per direction.
struct SpectralRadii {
  struct Cell {
    std::array<double, 3> inv_flow{}, inv_species{}, vis_flow{}, vis_species{}, vis_unified{};
    double nu_flow = 0.0, nu_species = 0.0, nu_unified = 0.0, J = 0.0;
  };
  struct Face {
    double inv_flow = 0.0, inv_species = 0.0, vis_flow = 0.0, vis_species = 0.0, vis_unified = 0.0;
  };

  Extents ext;
  std::vector<Cell> cells;
  std::array<std::vector<Face>, 3> faces;

  const Face& face(int d, const Index3& c) const { return faces[std::size_t(d)][face_flat(ext, d, c)]; }
};

/// Radii from the current primitives. Cell radii use the mean area vector of
/// the cell; face radii take the larger value of the two adjacent cells
/// evaluated on the shared face. Boundary faces use the interior cell.
inline SpectralRadii compute_spectral_radii(const FlowField& field, const StructuredGrid& grid, const MixtureModel& model,
                                            bool viscous, int threads = 1) {
  SpectralRadii r;
  r.ext = field.extents();
  const Extents& ext = r.ext;
  const PaddedLayout& lay = field.layout();
  r.cells.resize(ext.cells());
  parallel_for(ext.cells(), threads, [&](std::size_t b, std::size_t e) {
    for (std::size_t idx = b; idx < e; ++idx) {
      const Index3 c = lay.unflatten(idx);
      const CellPrimitive& w = field.primitive(c);
      auto& cr = r.cells[idx];
      cr.J = grid.jacobian(c);
      if (viscous) {
        const auto t = transport_scalars(w.rho, w.T, w.Y, w.cp, model);
        cr.nu_flow = group_diffusivity(w, t, EquationGroup::flow);
        cr.nu_species = group_diffusivity(w, t, EquationGroup::species);
        cr.nu_unified = std::max(cr.nu_flow, cr.nu_species);
      }
      for (int d = 0; d < 3; ++d) {
        if (!ext.active(d)) continue;
        const Vec3 S = grid.cell_area(d, c);
        const double U = std::abs(dot(w.u, S)), s2 = dot(S, S);
        cr.inv_flow[std::size_t(d)] = U + w.c * std::sqrt(s2);
        cr.inv_species[std::size_t(d)] = U;
        cr.vis_flow[std::size_t(d)] = cr.nu_flow * s2 * cr.J;
        cr.vis_species[std::size_t(d)] = cr.nu_species * s2 * cr.J;
        cr.vis_unified[std::size_t(d)] = cr.nu_unified * s2 * cr.J;
      }
    }
  });
  for (int d = 0; d < 3; ++d) {
    auto& faces = r.faces[std::size_t(d)];
    if (!ext.active(d)) {
      faces.clear();
      continue;
    }
    faces.assign(face_count(ext, d), {});
    for (std::size_t f = 0; f < faces.size(); ++f) {
      const Index3 c = face_from_flat(ext, d, f);
      const Vec3& S = grid.face_area(d, c);
      const double s2 = dot(S, S);
      auto& fr = faces[f];
      for (const Index3& n : {shifted(c, d, -1), c}) {
        if (!lay.is_interior(n)) continue;
        const CellPrimitive& w = field.primitive(n);
        const auto& cr = r.cells[lay.interior(n)];
        const double U = std::abs(dot(w.u, S));
        fr.inv_flow = std::max(fr.inv_flow, U + w.c * std::sqrt(s2));
        fr.inv_species = std::max(fr.inv_species, U);
        fr.vis_flow = std::max(fr.vis_flow, cr.nu_flow * s2 * cr.J);
        fr.vis_species = std::max(fr.vis_species, cr.nu_species * s2 * cr.J);
        fr.vis_unified = std::max(fr.vis_unified, cr.nu_unified * s2 * cr.J);
      }
    }
  }
  return r;
}

/// Species source Jacobians and their radii per cell; empty when chemistry is inactive.
struct SourceLinearization {
  std::vector<DenseMatrix> jac;
  std::vector<double> lambda;

  bool empty() const { return jac.empty(); }
  double radius(std::size_t cell) const { return lambda.empty() ? 0.0 : lambda[cell]; }
};

inline SourceLinearization linearize_source(const FlowField& field, const Mechanism& mech, const MixtureModel& model,
                                            int threads = 1) {
  SourceLinearization src;
  if (!mech.active()) return src;
  const Extents& ext = field.extents();
  src.jac.resize(ext.cells());
  src.lambda.resize(ext.cells());
  parallel_for(ext.cells(), threads, [&](std::size_t b, std::size_t e) {
    for (std::size_t idx = b; idx < e; ++idx) {
      src.jac[idx] = source_jacobian(field.primitive(field.layout().unflatten(idx)), mech, model);
      src.lambda[idx] = source_spectral_radius(src.jac[idx]);
    }
  });
  return src;
}

/// Per-cell pseudo-time steps from the unified (flow and species) radii.
inline std::vector<double> local_time_steps(const SpectralRadii& radii, const SourceLinearization& src, double cfl) {
  std::vector<double> dtau(radii.cells.size());
  for (std::size_t idx = 0; idx < dtau.size(); ++idx) {
    const auto& cr = radii.cells[idx];
    double inv = 0.0, vis = 0.0;
    for (int d = 0; d < 3; ++d) {
      inv += cr.inv_flow[std::size_t(d)];
      vis += cr.vis_unified[std::size_t(d)];
    }
    dtau[idx] = local_time_step(inv, vis, src.radius(idx), cfl, cr.J);
  }
  return dtau;
}

namespace detail {
inline void check_diagonal(double d) {
  if (!(std::abs(d) > LuFactor::kPivotFloor) || !std::isfinite(d)) throw SingularDiagonal("singular implicit diagonal");
}
}  // namespace detail

/// Coupled operator over all 5+ns equations: dense (5+ns)^2 off-diagonal
/// blocks formed from the neighbour state during the sweeps, a scalar
/// diagonal with unified radii, and the full species source block.
class CoupledOperator {
 public:
  struct Workspace {
    DenseMatrix A;
    std::vector<double> work;
  };

  CoupledOperator(const FlowField& field, const StructuredGrid& grid, const MixtureModel& model,
                  const SpectralRadii& radii, std::span<const double> dtau, const SourceLinearization& src = {},
                  DualTime dual = {})
      : field_(&field), grid_(&grid), model_(&model), radii_(&radii), diag_(radii.cells.size()) {
    const int ns = model.ns();
    if (!src.empty()) species_lu_.resize(diag_.size());
    for (std::size_t idx = 0; idx < diag_.size(); ++idx) {
      const auto& cr = radii.cells[idx];
      const double V = 1.0 / cr.J;
      double d = V / dtau[idx] + dual.diagonal(V);
      for (int k = 0; k < 3; ++k) d += cr.inv_flow[std::size_t(k)] + 2.0 * cr.vis_unified[std::size_t(k)];
      detail::check_diagonal(d);
      diag_[idx] = d;
      if (!src.empty()) {
        DenseMatrix block(ns, ns);
        const DenseMatrix& J = src.jac[idx];
        for (int s = 0; s < ns; ++s)
          for (int r = 0; r < ns; ++r) block(s, r) = (s == r ? d : 0.0) - V * J(s, r);
        species_lu_[idx] = LuFactor(std::move(block));
      }
    }
  }

  int nv() const { return model_->nv(); }

  Workspace workspace() const { return {DenseMatrix(nv(), nv()), std::vector<double>(std::size_t(nv()))}; }

  double diagonal(std::size_t cell) const { return diag_[cell]; }

  void solve_diagonal(Workspace& ws, std::size_t cell, std::span<double> x) const {
    const double inv = 1.0 / diag_[cell];
    if (species_lu_.empty()) {
      for (double& v : x) v *= inv;
      return;
    }
    for (int v = 0; v < var::species; ++v) x[std::size_t(v)] *= inv;
    species_lu_[cell].solve(x.subspan(var::species), ws.work);
  }

  /// acc += -[(A_nb + lambda I)/2 + lambda_vis I] dq_nb, nb = c - e_d.
  void add_lower(Workspace& ws, const Index3& c, int d, std::span<const double> dq_nb, std::span<double> acc) const {
    add_coupling(ws, shifted(c, d, -1), d, c, -1.0, dq_nb, acc);
  }

  /// acc += [(A_nb - lambda I)/2 - lambda_vis I] dq_nb, nb = c + e_d.
  void add_upper(Workspace& ws, const Index3& c, int d, std::span<const double> dq_nb, std::span<double> acc) const {
    const Index3 nb = shifted(c, d, 1);
    add_coupling(ws, nb, d, nb, 1.0, dq_nb, acc);
  }

 private:
  void add_coupling(Workspace& ws, const Index3& nb, int d, const Index3& face, double sign,
                    std::span<const double> dq_nb, std::span<double> acc) const {
    const Vec3& S = grid_->face_area(d, face);
    const auto& fr = radii_->face(d, face);
    convective_jacobian(field_->primitive(nb), S, *model_, ws.A);
    gemv_add(ws.A, dq_nb, acc, 0.5 * sign);
    const double scalar = -(0.5 * fr.inv_flow + fr.vis_unified);
    for (std::size_t v = 0; v < acc.size(); ++v) acc[v] += scalar * dq_nb[v];
  }

  const FlowField* field_;
  const StructuredGrid* grid_;
  const MixtureModel* model_;
  const SpectralRadii* radii_;
  std::vector<double> diag_;
  std::vector<LuFactor> species_lu_;
};

/// Component-split operator: 5x5 flow blocks at frozen mass fractions with
/// flow radii, plus one scalar equation per species with species radii and
/// the diagonal of the source Jacobian.
class SplitOperator {
 public:
  struct Workspace {
    std::array<double, 25> A{};
  };

  SplitOperator(const FlowField& field, const StructuredGrid& grid, const MixtureModel& model,
                const SpectralRadii& radii, std::span<const double> dtau, const SourceLinearization& src = {},
                DualTime dual = {}, SpeciesOffdiag offdiag = SpeciesOffdiag::symmetrized,
                SpeciesRadius species_radius = SpeciesRadius::matched)
      : field_(&field),
        grid_(&grid),
        model_(&model),
        radii_(&radii),
        ns_(model.ns()),
        offdiag_scale_(offdiag == SpeciesOffdiag::unhalved ? 1.0 : 0.5),
        matched_(species_radius == SpeciesRadius::matched),
        flow_diag_(radii.cells.size()),
        species_diag_(radii.cells.size() * std::size_t(model.ns())) {
    for (std::size_t idx = 0; idx < flow_diag_.size(); ++idx) {
      const auto& cr = radii.cells[idx];
      const double V = 1.0 / cr.J;
      const double base = V / dtau[idx] + dual.diagonal(V);
      double df = base, ds = base;
      for (int k = 0; k < 3; ++k) {
        df += cr.inv_flow[std::size_t(k)] + 2.0 * cr.vis_flow[std::size_t(k)];
        ds += (matched_ ? cr.inv_flow[std::size_t(k)] : cr.inv_species[std::size_t(k)]) +
              2.0 * cr.vis_species[std::size_t(k)];
      }
      detail::check_diagonal(df);
      flow_diag_[idx] = df;
      for (int s = 0; s < ns_; ++s) {
        const double dss = src.empty() ? ds : ds - V * src.jac[idx](s, s);
        detail::check_diagonal(dss);
        species_diag_[idx * std::size_t(ns_) + std::size_t(s)] = dss;
      }
    }
  }

  int nv() const { return model_->nv(); }

  Workspace workspace() const { return {}; }

  double flow_diagonal(std::size_t cell) const { return flow_diag_[cell]; }
  double species_diagonal(std::size_t cell, int s) const { return species_diag_[cell * std::size_t(ns_) + std::size_t(s)]; }

  void solve_diagonal(Workspace&, std::size_t cell, std::span<double> x) const {
    const double inv = 1.0 / flow_diag_[cell];
    for (int v = 0; v < var::species; ++v) x[std::size_t(v)] *= inv;
    const double* ds = species_diag_.data() + cell * std::size_t(ns_);
    for (int s = 0; s < ns_; ++s) x[std::size_t(var::species + s)] /= ds[s];
  }

  void add_lower(Workspace& ws, const Index3& c, int d, std::span<const double> dq_nb, std::span<double> acc) const {
    add_coupling(ws, shifted(c, d, -1), d, c, -1.0, dq_nb, acc);
  }

  void add_upper(Workspace& ws, const Index3& c, int d, std::span<const double> dq_nb, std::span<double> acc) const {
    const Index3 nb = shifted(c, d, 1);
    add_coupling(ws, nb, d, nb, 1.0, dq_nb, acc);
  }

 private:
  void add_coupling(Workspace& ws, const Index3& nb, int d, const Index3& face, double sign,
                    std::span<const double> dq_nb, std::span<double> acc) const {
    const Vec3& S = grid_->face_area(d, face);
    const auto& fr = radii_->face(d, face);
    const CellPrimitive& w = field_->primitive(nb);

    flow_jacobian(w, S, ws.A);
    const double flow_scalar = -(0.5 * fr.inv_flow + fr.vis_flow);
    for (int r = 0; r < 5; ++r) {
      double s = 0.0;
      for (int k = 0; k < 5; ++k) s += ws.A[std::size_t(5 * r + k)] * dq_nb[std::size_t(k)];
      acc[std::size_t(r)] += 0.5 * sign * s + flow_scalar * dq_nb[std::size_t(r)];
    }

    // lower: -[(U + lambda) k + lambda_vis]; upper: (U - lambda) k - lambda_vis; k = 1/2 or 1.
    const double U = dot(w.u, S);
    const double lambda = matched_ ? fr.inv_flow : fr.inv_species;
    const double coef = offdiag_scale_ * (sign * U - lambda) - fr.vis_species;
    const double* dq = dq_nb.data() + var::species;
    double* out = acc.data() + var::species;
    for (int s = 0; s < ns_; ++s) out[s] += coef * dq[s];
  }

  const FlowField* field_;
  const StructuredGrid* grid_;
  const MixtureModel* model_;
  const SpectralRadii* radii_;
  int ns_;
  double offdiag_scale_;
  bool matched_;
  std::vector<double> flow_diag_;
  std::vector<double> species_diag_;
};

/// Operator with explicitly stored blocks: D per cell, and per cell and
/// direction the lower block (coupling to c - e_d) and upper block (c + e_d).
class DenseBlockOperator {
 public:
  struct Workspace {
    std::vector<double> work;
  };

  DenseBlockOperator(Extents ext, int nv)
      : ext_(ext), layout_(ext), nv_(nv), diag_(ext.cells(), DenseMatrix(nv, nv)), lu_(ext.cells()) {
    for (auto& blocks : {&lower_, &upper_})
      for (auto& b : *blocks) b.assign(ext.cells(), DenseMatrix(nv, nv));
  }

  const Extents& extents() const { return ext_; }
  int nv() const { return nv_; }

  DenseMatrix& diagonal(std::size_t cell) { return diag_[cell]; }
  const DenseMatrix& diagonal(std::size_t cell) const { return diag_[cell]; }
  DenseMatrix& lower(std::size_t cell, int d) { return lower_[std::size_t(d)][cell]; }
  const DenseMatrix& lower(std::size_t cell, int d) const { return lower_[std::size_t(d)][cell]; }
  DenseMatrix& upper(std::size_t cell, int d) { return upper_[std::size_t(d)][cell]; }
  const DenseMatrix& upper(std::size_t cell, int d) const { return upper_[std::size_t(d)][cell]; }

  /// Factorizes the diagonal blocks; call after filling them.
  void factorize() {
    for (std::size_t c = 0; c < diag_.size(); ++c) lu_[c] = LuFactor(diag_[c]);
  }

  Workspace workspace() const { return {std::vector<double>(std::size_t(nv_))}; }

  void solve_diagonal(Workspace& ws, std::size_t cell, std::span<double> x) const { lu_[cell].solve(x, ws.work); }

  void add_lower(Workspace&, const Index3& c, int d, std::span<const double> dq_nb, std::span<double> acc) const {
    gemv_add(lower(layout_.interior(c), d), dq_nb, acc);
  }
  void add_upper(Workspace&, const Index3& c, int d, std::span<const double> dq_nb, std::span<double> acc) const {
    gemv_add(upper(layout_.interior(c), d), dq_nb, acc);
  }

 private:
  Extents ext_;
  PaddedLayout layout_;
  int nv_;
  std::vector<DenseMatrix> diag_;
  std::array<std::vector<DenseMatrix>, 3> lower_, upper_;
  std::vector<LuFactor> lu_;
};

/// Stores the blocks of any operator explicitly by probing it with unit vectors.
template <class Op>
DenseBlockOperator materialize(const Op& op, const Extents& ext) {
  const int nv = op.nv();
  DenseBlockOperator out(ext, nv);
  const PaddedLayout lay(ext);
  auto ws = op.workspace();
  std::vector<double> e(static_cast<std::size_t>(nv)), col(static_cast<std::size_t>(nv));
  for (std::size_t idx = 0; idx < ext.cells(); ++idx) {
    const Index3 c = lay.unflatten(idx);
    for (int j = 0; j < nv; ++j) {
      std::fill(e.begin(), e.end(), 0.0);
      e[std::size_t(j)] = 1.0;
      // D^-1 e_j gives a column of D^-1; invert the assembled inverse afterwards.
      col = e;
      op.solve_diagonal(ws, idx, col);
      for (int i = 0; i < nv; ++i) out.diagonal(idx)(i, j) = col[std::size_t(i)];
      for (int d = 0; d < 3; ++d) {
        if (!ext.active(d)) continue;
        if (c[d] > 0) {
          std::fill(col.begin(), col.end(), 0.0);
          op.add_lower(ws, c, d, e, col);
          for (int i = 0; i < nv; ++i) out.lower(idx, d)(i, j) = col[std::size_t(i)];
        }
        if (c[d] + 1 < ext[d]) {
          std::fill(col.begin(), col.end(), 0.0);
          op.add_upper(ws, c, d, e, col);
          for (int i = 0; i < nv; ++i) out.upper(idx, d)(i, j) = col[std::size_t(i)];
        }
      }
    }
    // Convert the stored D^-1 into D.
    LuFactor inv(out.diagonal(idx));
    DenseMatrix D(nv, nv);
    for (int j = 0; j < nv; ++j) {
      std::fill(e.begin(), e.end(), 0.0);
      e[std::size_t(j)] = 1.0;
      inv.solve(e);
      for (int i = 0; i < nv; ++i) D(i, j) = e[std::size_t(i)];
    }
    out.diagonal(idx) = std::move(D);
  }
  out.factorize();
  return out;
}

}  // namespace splitflow
