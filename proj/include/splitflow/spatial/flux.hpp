#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "splitflow/mixture/mixture.hpp"

namespace splitflow {

/// Inviscid flux through an area vector S: F(prim) . S.
inline void physical_flux(const CellPrimitive& w, const Vec3& S, const MixtureModel& model, std::span<double> f) {
  const double U = dot(w.u, S);
  const double mdot = w.rho * U;
  f[var::rho] = mdot;
  f[var::mom] = mdot * w.u.x + w.p * S.x;
  f[var::mom + 1] = mdot * w.u.y + w.p * S.y;
  f[var::mom + 2] = mdot * w.u.z + w.p * S.z;
  f[var::energy] = mdot * w.h;
  for (int s = 0; s < model.ns(); ++s) f[std::size_t(var::species + s)] = mdot * w.Y[std::size_t(s)];
}

/// Equation groups that carry distinct spectral radii.
enum class EquationGroup { flow, species, unified };

/// (|U| + c |S|) for flow and unified groups, |U| for species.
inline double inviscid_spectral_radius(const CellPrimitive& w, const Vec3& S, EquationGroup group = EquationGroup::flow) {
  const double U = std::abs(dot(w.u, S));
  return group == EquationGroup::species ? U : U + w.c * norm(S);
}

/// Effective diffusivity of the group (m^2/s).
inline double group_diffusivity(const CellPrimitive& w, const TransportScalars& t, EquationGroup group) {
  const double flow = std::max(4.0 * t.mu / (3.0 * w.rho), t.k / (w.rho * w.cv()));
  switch (group) {
    case EquationGroup::flow: return flow;
    case EquationGroup::species: return t.D;
    case EquationGroup::unified: return std::max(flow, t.D);
  }
  return flow;
}

/// nu_group |S|^2 J, with J the inverse cell volume.
inline double viscous_spectral_radius(const CellPrimitive& w, const Vec3& S, double jacobian, const MixtureModel& model,
                                      EquationGroup group) {
  const auto t = transport_scalars(w.rho, w.T, w.Y, w.cp, model);
  return group_diffusivity(w, t, group) * dot(S, S) * jacobian;
}

/// Rusanov flux: average of the physical fluxes minus spectral-radius
/// dissipation on the conservative jump.
class RusanovFlux {
 public:
  explicit RusanovFlux(const MixtureModel& model)
      : model_(&model), fl_(std::size_t(model.nv())), fr_(fl_.size()), ql_(fl_.size()), qr_(fl_.size()) {}

  void operator()(const CellPrimitive& left, const CellPrimitive& right, const Vec3& S, std::span<double> flux) {
    physical_flux(left, S, *model_, fl_);
    physical_flux(right, S, *model_, fr_);
    prim_to_cons(left, *model_, ql_);
    prim_to_cons(right, *model_, qr_);
    const double lam = std::max(inviscid_spectral_radius(left, S), inviscid_spectral_radius(right, S));
    for (std::size_t v = 0; v < fl_.size(); ++v) flux[v] = 0.5 * (fl_[v] + fr_[v]) - 0.5 * lam * (qr_[v] - ql_[v]);
  }

 private:
  const MixtureModel* model_;
  std::vector<double> fl_, fr_, ql_, qr_;
};

inline std::vector<double> convective_flux(const CellPrimitive& left, const CellPrimitive& right, const Vec3& S,
                                           const MixtureModel& model) {
  std::vector<double> f(std::size_t(model.nv()));
  RusanovFlux rusanov(model);
  rusanov(left, right, S, f);
  return f;
}

}  // namespace splitflow
