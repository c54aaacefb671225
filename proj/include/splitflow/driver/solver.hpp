#pragma once

// Pseudo-time steady solver and dual-time unsteady solver built on the
// residual assembler, the implicit operators and the LU-SGS sweeps.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "splitflow/chemistry/mechanism.hpp"
#include "splitflow/driver/history.hpp"
#include "splitflow/grid/boundary.hpp"
#include "splitflow/implicit/correction.hpp"
#include "splitflow/implicit/lusgs.hpp"
#include "splitflow/implicit/operator.hpp"
#include "splitflow/spatial/residual.hpp"

namespace splitflow {

/// CFL(iter) = min(start * factor^floor((iter - 1) / every), max).
struct CflSchedule {
  double start = 5.0;
  double factor = 1.0;
  int every = 0;
  double max = std::numeric_limits<double>::infinity();

  double at(int iter) const {
    if (every <= 0 || factor == 1.0) return std::min(start, max);
    return std::min(start * std::pow(factor, double((iter - 1) / every)), max);
  }
};

/// Monitored norm: flow rows, the density row alone, or every row.
enum class StopNorm { flow, density, all };

struct StopCriteria {
  double orders = 6.0;  // residual drop below the largest value seen
  int max_iters = 5000;
  double floor = 1e-12;  // absolute bound on the scaled norm
  StopNorm norm = StopNorm::flow;
  double plateau_tol = 0.0;  // relative change of the monitored wall heat flux; 0 disables
  int plateau_window = 20;   // successive monitor samples that must all be within plateau_tol
  int monitor_every = 10;
};

struct SolverSettings {
  Scheme scheme = Scheme::CI;
  CflSchedule cfl;
  SpeciesOffdiag offdiag = SpeciesOffdiag::symmetrized;
  SpeciesRadius species_radius = SpeciesRadius::matched;
  ResidualOptions residual;
  int threads = 1;
  int max_retries = 5;
  double eps_neg = kNegativeFractionTolerance;
};

struct ResidualNorms {
  double rho = 0.0;
  double flow = 0.0;
  double species = 0.0;
};

/// Grouped L2 norms over interior cells. With `scale`, row v of cell c is
/// divided by scale[v] * area[c] first.
inline ResidualNorms residual_norms(const CellVector& R, int ns, std::span<const double> scale = {},
                                    std::span<const double> area = {}) {
  ResidualNorms n;
  for (std::size_t c = 0; c < R.cells(); ++c) {
    const auto r = R[c];
    const double a = area.empty() ? 1.0 : area[c];
    auto val = [&](int v) { return scale.empty() ? r[std::size_t(v)] : r[std::size_t(v)] / (scale[std::size_t(v)] * a); };
    const double rho = val(var::rho);
    n.rho += rho * rho;
    n.flow += rho * rho;
    for (int v = 1; v < var::species; ++v) n.flow += val(v) * val(v);
    for (int s = 0; s < ns; ++s) n.species += val(var::species + s) * val(var::species + s);
  }
  n.rho = std::sqrt(n.rho);
  n.flow = std::sqrt(n.flow);
  n.species = std::sqrt(n.species);
  return n;
}

struct WallHeatFlux {
  int side = 0;
  Index3 cell;     // interior cell adjacent to the wall face
  Vec3 center;     // wall face center
  double q = 0.0;  // W/m^2, positive into the wall
};

/// Wall heat flux q_w = -k dT/dn with n pointing from the fluid into the
/// wall, from a one-sided second-order difference through the wall
/// temperature and the first two cell centroids (first order when the
/// direction holds a single cell). k is evaluated at the wall temperature.
inline std::vector<WallHeatFlux> wall_heat_flux(const FlowField& field, const StructuredGrid& grid,
                                                const BoundarySet& bcs, const MixtureModel& model) {
  if (!bcs.has_wall()) throw NoWallBoundary("no no-slip isothermal boundary in the case");
  const Extents& ext = field.extents();
  std::vector<WallHeatFlux> out;
  for (int side = 0; side < 6; ++side) {
    const BoundaryCondition& bc = bcs.at(side);
    if (bc.kind != BcKind::noslip_isothermal) continue;
    const int d = side / 2, hi = side % 2;
    const int t1 = (d + 1) % 3, t2 = (d + 2) % 3;
    for (int b = 0; b < ext[t2]; ++b)
      for (int a = 0; a < ext[t1]; ++a) {
        Index3 c1;
        c1[t1] = a;
        c1[t2] = b;
        c1[d] = hi ? ext[d] - 1 : 0;
        const Index3 face = hi ? shifted(c1, d, 1) : c1;
        const Vec3& S = grid.face_area(d, face);
        const Vec3 x0 = grid.face_center(d, face);
        // Unit normal pointing into the fluid.
        const Vec3 n_in = S * ((hi ? -1.0 : 1.0) / norm(S));
        const CellPrimitive& w1 = field.primitive(c1);
        const double T_w = bc.wall_temperature;
        const double s1 = dot(grid.centroid(c1) - x0, n_in);
        double dTds = (w1.T - T_w) / s1;
        if (ext[d] > 1) {
          const Index3 c2 = shifted(c1, d, hi ? -1 : 1);
          const double s2 = dot(grid.centroid(c2) - x0, n_in);
          const double T2 = field.primitive(c2).T;
          dTds = (w1.T - T_w) * s2 / (s1 * (s2 - s1)) - (T2 - T_w) * s1 / (s2 * (s2 - s1));
        }
        const double k = transport_scalars(w1.rho, T_w, w1.Y, mixture_cp(w1.Y, model), model).k;
        // dT/dn_wall = -dT/ds with s measured into the fluid.
        out.push_back({side, c1, x0, k * dTds});
      }
  }
  return out;
}

/// Heat flux at the wall face nearest to the most upstream wall point
/// (smallest x), the stagnation point for flow along +x.
inline double stagnation_heat_flux(const std::vector<WallHeatFlux>& q) {
  if (q.empty()) return std::nan("");
  const WallHeatFlux* best = &q.front();
  for (const auto& w : q)
    if (w.center.x < best->center.x) best = &w;
  return best->q;
}

struct DualTimeSettings {
  double dt = 0.0;
  int theta = 2;
  int steps = 1;
  double inner_orders = 8.0;
  int inner_max_iters = 200;
  double inner_floor = 1e-13;
};

struct SolveResult {
  ConvergenceHistory history;
  bool converged = false;
  std::string reason;
};

class Solver {
 public:
  Solver(const MixtureModel& model, const Mechanism& mech, const StructuredGrid& grid, BoundarySet bcs,
         SolverSettings settings, const CellPrimitive& reference)
      : model_(&model),
        mech_(&mech),
        grid_(&grid),
        bcs_(std::move(bcs)),
        settings_(settings),
        field_(grid.extents(), model),
        assembler_(model, mech, with_threads(settings.residual, settings.threads)),
        order_(grid.extents()) {
    bcs_.validate();
    const int nv = model.nv();
    const double w = norm(reference.u) + reference.c;
    scale_.assign(std::size_t(nv), reference.rho * w);
    for (int i = 0; i < 3; ++i) scale_[std::size_t(var::mom + i)] = reference.rho * w * w;
    scale_[var::energy] = reference.rho * w * (reference.cp * reference.T + 0.5 * w * w);
    const Extents& ext = grid.extents();
    area_.resize(ext.cells());
    for (std::size_t c = 0; c < ext.cells(); ++c) area_[c] = grid.max_face_area(field_.layout().unflatten(c));
    field_.fill(reference, model);
  }

  FlowField& field() { return field_; }
  const FlowField& field() const { return field_; }
  const StructuredGrid& grid() const { return *grid_; }
  const BoundarySet& boundaries() const { return bcs_; }
  const MixtureModel& model() const { return *model_; }
  const SolverSettings& settings() const { return settings_; }
  SolverSettings& settings() { return settings_; }
  const CellVector& residual() const { return R_; }
  const CellVector& increment() const { return dq_; }

  void initialize(const CellPrimitive& state) { field_.fill(state, *model_); }

  /// Fills ghosts and assembles R(Q) for the current state.
  const CellVector& assemble() {
    apply_boundary_conditions(field_, *grid_, bcs_, *model_);
    assembler_.assemble(field_, *grid_, bcs_, R_);
    return R_;
  }

  ResidualNorms scaled_norms(const CellVector& R) const { return residual_norms(R, model_->ns(), scale_, area_); }
  ResidualNorms raw_norms(const CellVector& R) const { return residual_norms(R, model_->ns()); }

  struct Step {
    ResidualNorms norms;     // of the right-hand side before the update
    double implicit_seconds = 0.0;
    double cfl = 0.0;        // CFL actually used
    int retries = 0;
  };

  /// One pseudo-time iteration. Returns the norms of the right-hand side at
  /// the incoming state; when `update` is false the state is left untouched.
  /// With dual time active, qn/qnm1 hold Q^n and Q^{n-1}.
  Step step(double cfl, bool update = true, const DualTime& dual = {}, const CellVector* qn = nullptr,
            const CellVector* qnm1 = nullptr) {
    assemble();
    const Extents& ext = field_.extents();
    const PaddedLayout& lay = field_.layout();
    const int nv = model_->nv();
    if (rhs_.cells() != ext.cells()) rhs_ = CellVector(ext.cells(), nv);
    for (std::size_t c = 0; c < ext.cells(); ++c) {
      const Index3 idx = lay.unflatten(c);
      const auto q = field_.q(idx);
      if (dual.active())
        dual_time_rhs(R_[c], q, (*qn)[c], (*qnm1)[c], dual, grid_->volume(idx), rhs_[c]);
      else
        dual_time_rhs(R_[c], q, q, q, dual, 0.0, rhs_[c]);
    }
    Step out;
    out.norms = scaled_norms(rhs_);
    out.cfl = cfl;
    if (!std::isfinite(out.norms.flow) || !std::isfinite(out.norms.species))
      throw Diverged("non-finite residual norm");
    if (!update) return out;
    const Step up = update_from_current_rhs(cfl, dual);
    out.implicit_seconds = up.implicit_seconds;
    out.cfl = up.cfl;
    out.retries = up.retries;
    return out;
  }

  /// Local-time-stepping iterations until the residual drops, the wall heat
  /// flux plateaus, or the iteration limit is reached.
  SolveResult steady_solve(const StopCriteria& stop) {
    SolveResult res;
    res.history.monitor_every = stop.monitor_every;
    res.history.plateau_window = stop.plateau_window;
    const auto t0 = std::chrono::steady_clock::now();
    const bool has_wall = bcs_.has_wall();
    double peak = 0.0, implicit = 0.0;
    std::vector<double> samples;
    for (int iter = 1; iter <= stop.max_iters; ++iter) {
      const double cfl = settings_.cfl.at(iter);
      Step st = step(cfl, false);
      HistoryRow row;
      row.iter = iter;
      row.res_rho = st.norms.rho;
      row.res_flow = st.norms.flow;
      row.res_species = st.norms.species;
      if (has_wall) row.q_stag = stagnation_heat_flux(wall_heat_flux(field_, *grid_, bcs_, *model_));
      row.cfl = cfl;

      const double v = stop.norm == StopNorm::density ? st.norms.rho
                       : stop.norm == StopNorm::all   ? std::hypot(st.norms.flow, st.norms.species)
                                                      : st.norms.flow;
      peak = std::max(peak, v);
      bool done = false;
      if (v <= stop.floor || v <= peak * std::pow(10.0, -stop.orders)) {
        res.converged = true;
        res.reason = "residual";
        done = true;
      }
      if (!done && has_wall && stop.plateau_tol > 0.0 && iter % stop.monitor_every == 0) {
        samples.push_back(row.q_stag);
        if (plateaued(samples, stop.plateau_window, stop.plateau_tol)) {
          res.converged = true;
          res.reason = "wall heat flux plateau";
          done = true;
        }
      }
      if (!done) {
        st = update_from_current_rhs(cfl);
        implicit += st.implicit_seconds;
        row.retries = st.retries;
      }
      row.implicit_seconds = implicit;
      row.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      res.history.rows.push_back(row);
      if (done) return res;
    }
    res.reason = "iteration limit";
    return res;
  }

  /// Dual-time integration over `settings.steps` physical steps. The first
  /// step is backward Euler; later steps use the order selected by theta.
  /// `on_step(n)` is called after each physical step.
  SolveResult unsteady_solve(const DualTimeSettings& ts, const std::function<void(int)>& on_step = {}) {
    if (!(ts.dt > 0.0)) throw ValidationError({"dual-time step dt must be positive"});
    SolveResult res;
    const auto t0 = std::chrono::steady_clock::now();
    const Extents& ext = field_.extents();
    const PaddedLayout& lay = field_.layout();
    const int nv = model_->nv();
    CellVector qn(ext.cells(), nv), qnm1(ext.cells(), nv);
    auto snapshot = [&](CellVector& dst) {
      for (std::size_t c = 0; c < ext.cells(); ++c) {
        const auto q = field_.q(lay.unflatten(c));
        std::copy(q.begin(), q.end(), dst[c].begin());
      }
    };
    snapshot(qn);
    qnm1 = qn;
    double implicit = 0.0;
    int iter = 0;
    res.converged = true;
    for (int n = 1; n <= ts.steps; ++n) {
      const DualTime dual = n == 1 ? DualTime{ts.dt, 1} : DualTime::from_theta(ts.dt, ts.theta);
      double peak = 0.0;
      bool inner_ok = false;
      for (int m = 1; m <= ts.inner_max_iters; ++m) {
        const double cfl = settings_.cfl.at(m);
        Step st = step(cfl, false, dual, &qn, &qnm1);
        ++iter;
        HistoryRow row;
        row.iter = iter;
        row.res_rho = st.norms.rho;
        row.res_flow = st.norms.flow;
        row.res_species = st.norms.species;
        row.cfl = cfl;
        const double v = std::max(st.norms.flow, st.norms.species);
        peak = std::max(peak, v);
        const bool done = v <= ts.inner_floor || v <= peak * std::pow(10.0, -ts.inner_orders);
        if (!done) {
          st = update_from_current_rhs(cfl, dual);
          implicit += st.implicit_seconds;
          row.retries = st.retries;
        }
        row.implicit_seconds = implicit;
        row.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        res.history.rows.push_back(row);
        if (done) {
          inner_ok = true;
          break;
        }
      }
      if (!inner_ok) res.converged = false;
      qnm1 = qn;
      snapshot(qn);
      if (on_step) on_step(n);
    }
    res.reason = res.converged ? "all inner iterations converged" : "inner iteration limit reached";
    return res;
  }

 private:
  static ResidualOptions with_threads(ResidualOptions o, int threads) {
    o.threads = threads;
    return o;
  }

  static bool plateaued(const std::vector<double>& s, int window, double tol) {
    if (int(s.size()) < window + 1) return false;
    for (std::size_t i = s.size() - std::size_t(window); i < s.size(); ++i) {
      const double ref = std::abs(s[i]);
      if (!(std::abs(s[i] - s[i - 1]) <= tol * ref)) return false;
    }
    return true;
  }

  /// Implicit update using the right-hand side already held in rhs_ (the
  /// residual was assembled by the preceding step(..., false) call).
  Step update_from_current_rhs(double cfl, const DualTime& dual = {}) {
    Step out;
    out.cfl = cfl;
    const auto t0 = std::chrono::steady_clock::now();
    const auto radii = compute_spectral_radii(field_, *grid_, *model_, settings_.residual.viscous, settings_.threads);
    const auto src = linearize_source(field_, *mech_, *model_, settings_.threads);
    backup_ = field_.q.raw();
    for (int attempt = 0;; ++attempt) {
      try {
        const auto dtau = local_time_steps(radii, src, out.cfl);
        if (settings_.scheme == Scheme::CI) {
          CoupledOperator op(field_, *grid_, *model_, radii, dtau, src, dual);
          lusgs_solve(op, order_, rhs_, dq_, settings_.threads);
        } else {
          SplitOperator op(field_, *grid_, *model_, radii, dtau, src, dual, settings_.offdiag, settings_.species_radius);
          lusgs_solve(op, order_, rhs_, dq_, settings_.threads);
        }
        apply_update();
        break;
      } catch (const NonPhysicalState&) {
        field_.q.raw() = backup_;
        field_.decode(*model_);
        if (attempt >= settings_.max_retries) throw Diverged("state remained non-physical after CFL halving retries");
        out.cfl *= 0.5;
        ++out.retries;
      }
    }
    out.implicit_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
  }

  void apply_update() {
    const Extents& ext = field_.extents();
    const PaddedLayout& lay = field_.layout();
    const int ns = model_->ns();
    work_.resize(std::size_t(ns));
    for (std::size_t c = 0; c < ext.cells(); ++c) {
      auto d = dq_[c];
      for (double v : d)
        if (!std::isfinite(v)) throw NonPhysicalState("non-finite increment", long(c));
      try {
        apply_increment(settings_.scheme, field_.q(lay.unflatten(c)), d, ns, work_, settings_.eps_neg);
      } catch (const NonPhysicalState& e) {
        throw NonPhysicalState(e.what(), long(c));
      }
    }
    field_.decode(*model_);
  }

  const MixtureModel* model_;
  const Mechanism* mech_;
  const StructuredGrid* grid_;
  BoundarySet bcs_;
  SolverSettings settings_;
  FlowField field_;
  ResidualAssembler assembler_;
  SweepOrder order_;
  std::vector<double> scale_, area_, backup_, work_;
  CellVector R_, rhs_, dq_;
};

}  // namespace splitflow
