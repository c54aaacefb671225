#pragma once

// Thermally perfect mixture of calorically perfect species: equation of
// state, conservative <-> primitive decoding, and transport closures.
//
// Conservative layout, nv = 5 + ns:
//   [rho, rho*u, rho*v, rho*w, rho*e_t, rho*Y_1, ..., rho*Y_ns]

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "splitflow/core/error.hpp"
#include "splitflow/core/types.hpp"

namespace splitflow {

inline constexpr double kUniversalGasConstant = 8.314462618;  // J/(mol K)
inline constexpr double kNegativeFractionTolerance = 1e-10;

namespace var {
inline constexpr int rho = 0;
inline constexpr int mom = 1;  // rho*u at mom, rho*v at mom+1, rho*w at mom+2
inline constexpr int energy = 4;
inline constexpr int species = 5;
inline constexpr int flow_count = 5;
}  // namespace var

struct SpeciesData {
  std::string name;
  double M = 0.0;       // kg/mol
  double cp = 0.0;      // J/(kg K)
  double hf = 0.0;      // J/kg at T_ref
  double T_ref = 0.0;   // K
  double mu_ref = 0.0;  // Pa s, Sutherland reference viscosity
  double T_mu = 273.15;
  double S_mu = 110.4;
};

class MixtureModel {
 public:
  MixtureModel() = default;
  MixtureModel(std::vector<SpeciesData> species, double Pr = 0.72, double Sc = 0.7)
      : species_(std::move(species)), Pr_(Pr), Sc_(Sc) {
    std::vector<std::string> errors;
    if (species_.empty()) errors.push_back("mixture needs at least one species");
    if (!(Pr_ > 0.0)) errors.push_back("Pr must be positive");
    if (!(Sc_ > 0.0)) errors.push_back("Sc must be positive");
    std::unordered_set<std::string> names;
    for (const auto& s : species_) {
      if (!names.insert(s.name).second) errors.push_back("duplicate species '" + s.name + "'");
      if (!(s.M > 0.0)) errors.push_back("species '" + s.name + "': M must be positive");
      if (!(s.cp > kUniversalGasConstant / s.M)) errors.push_back("species '" + s.name + "': cp must exceed R_u/M");
      if (!(s.mu_ref >= 0.0)) errors.push_back("species '" + s.name + "': mu_ref must be non-negative");
      if (!(s.T_mu > 0.0)) errors.push_back("species '" + s.name + "': T_mu must be positive");
    }
    if (!errors.empty()) throw ValidationError(errors);
    for (const auto& s : species_) {
      R_.push_back(kUniversalGasConstant / s.M);
      cv_.push_back(s.cp - kUniversalGasConstant / s.M);
      e0_.push_back(s.hf - s.cp * s.T_ref);
    }
  }

  int ns() const { return int(species_.size()); }
  int nv() const { return var::flow_count + ns(); }
  double Pr() const { return Pr_; }
  double Sc() const { return Sc_; }
  double R_u() const { return kUniversalGasConstant; }

  const std::vector<SpeciesData>& species() const { return species_; }
  const SpeciesData& species(int s) const { return species_[std::size_t(s)]; }

  /// Specific gas constant R_u/M_s.
  double R(int s) const { return R_[std::size_t(s)]; }
  double cv(int s) const { return cv_[std::size_t(s)]; }
  double cp(int s) const { return species_[std::size_t(s)].cp; }
  /// Internal-energy offset: e_s(T) = e0_s + cv_s T.
  double e0(int s) const { return e0_[std::size_t(s)]; }
  /// Species enthalpy h_s(T) = hf_s + cp_s (T - T_ref).
  double h(int s, double T) const {
    const auto& sp = species_[std::size_t(s)];
    return sp.hf + sp.cp * (T - sp.T_ref);
  }

  int index_of(const std::string& name) const {
    for (int s = 0; s < ns(); ++s)
      if (species_[std::size_t(s)].name == name) return s;
    return -1;
  }

 private:
  std::vector<SpeciesData> species_;
  double Pr_ = 0.72;
  double Sc_ = 0.7;
  std::vector<double> R_, cv_, e0_;
};

struct CellPrimitive {
  double rho = 0.0;
  Vec3 u{};
  double p = 0.0;
  double T = 0.0;
  std::vector<double> Y;
  double c = 0.0;      // frozen sound speed
  double gamma = 0.0;  // cp_mix / cv_mix
  double h = 0.0;      // total enthalpy: sum Y_s h_s(T) + ek
  double ek = 0.0;     // |u|^2 / 2
  double R = 0.0;      // mixture gas constant
  double cp = 0.0;     // mixture cp

  double static_enthalpy() const { return h - ek; }
  double cv() const { return cp - R; }
};

inline double mixture_gas_constant(std::span<const double> Y, const MixtureModel& model) {
  double r = 0.0;
  for (int s = 0; s < model.ns(); ++s) r += Y[std::size_t(s)] * model.R(s);
  return r;
}

inline double mixture_cp(std::span<const double> Y, const MixtureModel& model) {
  double c = 0.0;
  for (int s = 0; s < model.ns(); ++s) c += Y[std::size_t(s)] * model.cp(s);
  return c;
}

inline double pressure(double rho, std::span<const double> Y, double T, const MixtureModel& model) {
  return rho * mixture_gas_constant(Y, model) * T;
}

/// Fills c, gamma, h, ek, R, cp and p from (rho, u, T, Y).
inline void complete_from_temperature(CellPrimitive& prim, const MixtureModel& model) {
  prim.R = mixture_gas_constant(prim.Y, model);
  prim.cp = mixture_cp(prim.Y, model);
  prim.p = prim.rho * prim.R * prim.T;
  prim.gamma = prim.cp / (prim.cp - prim.R);
  prim.c = std::sqrt(prim.gamma * prim.R * prim.T);
  prim.ek = 0.5 * dot(prim.u, prim.u);
  double hs = 0.0;
  for (int s = 0; s < model.ns(); ++s) hs += prim.Y[std::size_t(s)] * model.h(s, prim.T);
  prim.h = hs + prim.ek;
}

/// Builds a primitive state from pressure, temperature, velocity and mass fractions.
inline CellPrimitive make_primitive(double p, double T, const Vec3& u, std::vector<double> Y,
                                    const MixtureModel& model) {
  CellPrimitive prim;
  prim.Y = std::move(Y);
  prim.T = T;
  prim.u = u;
  prim.rho = p / (mixture_gas_constant(prim.Y, model) * T);
  complete_from_temperature(prim, model);
  return prim;
}

/// Decodes T from a conservative state with mass fractions Y (already
/// normalized). Closed form for constant per-species cp.
inline double temperature_from_energy(std::span<const double> q, std::span<const double> Y,
                                      const MixtureModel& model) {
  const double rho = q[var::rho];
  if (!(rho > 0.0)) throw NonPhysicalState("non-positive density");
  const Vec3 m{q[var::mom], q[var::mom + 1], q[var::mom + 2]};
  const double e_int = q[var::energy] / rho - 0.5 * dot(m, m) / (rho * rho);
  double offset = 0.0, cv = 0.0;
  for (int s = 0; s < model.ns(); ++s) {
    offset += Y[std::size_t(s)] * model.e0(s);
    cv += Y[std::size_t(s)] * model.cv(s);
  }
  if (!(cv > 0.0)) throw NonPhysicalState("non-positive mixture heat capacity");
  const double T = (e_int - offset) / cv;
  if (!(T > 0.0)) throw NonPhysicalState("non-positive temperature");
  return T;
}

/// Mass fractions rho_s / rho with tiny negatives clipped and the result
/// renormalized to unit sum.
inline void mass_fractions(std::span<const double> q, const MixtureModel& model, std::vector<double>& Y,
                           double eps_neg = kNegativeFractionTolerance) {
  const double rho = q[var::rho];
  if (!(rho > 0.0)) throw NonPhysicalState("non-positive density");
  const int ns = model.ns();
  Y.resize(std::size_t(ns));
  double sum = 0.0;
  for (int s = 0; s < ns; ++s) {
    double y = q[std::size_t(var::species + s)] / rho;
    if (!(y >= -eps_neg)) throw NonPhysicalState("negative mass fraction of '" + model.species(s).name + "'");
    y = std::max(y, 0.0);
    Y[std::size_t(s)] = y;
    sum += y;
  }
  if (!(sum > 0.0)) throw NonPhysicalState("all mass fractions vanish");
  for (auto& y : Y) y /= sum;
}

inline double temperature_from_energy(std::span<const double> q, const MixtureModel& model) {
  std::vector<double> Y;
  mass_fractions(q, model, Y);
  return temperature_from_energy(q, Y, model);
}

inline void cons_to_prim(std::span<const double> q, const MixtureModel& model, CellPrimitive& out,
                         double eps_neg = kNegativeFractionTolerance) {
  const double rho = q[var::rho];
  if (!(rho > 0.0) || !std::isfinite(rho)) throw NonPhysicalState("non-positive density");
  mass_fractions(q, model, out.Y, eps_neg);
  out.rho = rho;
  out.u = Vec3{q[var::mom] / rho, q[var::mom + 1] / rho, q[var::mom + 2] / rho};
  out.T = temperature_from_energy(q, out.Y, model);
  complete_from_temperature(out, model);
}

inline CellPrimitive cons_to_prim(std::span<const double> q, const MixtureModel& model) {
  CellPrimitive out;
  cons_to_prim(q, model, out);
  return out;
}

inline void prim_to_cons(const CellPrimitive& prim, const MixtureModel& model, std::span<double> q) {
  q[var::rho] = prim.rho;
  q[var::mom] = prim.rho * prim.u.x;
  q[var::mom + 1] = prim.rho * prim.u.y;
  q[var::mom + 2] = prim.rho * prim.u.z;
  q[var::energy] = prim.rho * prim.h - prim.p;
  for (int s = 0; s < model.ns(); ++s) q[std::size_t(var::species + s)] = prim.rho * prim.Y[std::size_t(s)];
}

inline std::vector<double> prim_to_cons(const CellPrimitive& prim, const MixtureModel& model) {
  std::vector<double> q(std::size_t(model.nv()));
  prim_to_cons(prim, model, q);
  return q;
}

struct TransportProperties {
  double mu = 0.0;
  double k = 0.0;
  std::vector<double> D;  // identical for every species under the constant-Sc closure
};

inline double sutherland(const SpeciesData& s, double T) {
  return s.mu_ref * std::pow(T / s.T_mu, 1.5) * (s.T_mu + s.S_mu) / (T + s.S_mu);
}

inline double mixture_viscosity(std::span<const double> Y, double T, const MixtureModel& model) {
  double mu = 0.0;
  for (int s = 0; s < model.ns(); ++s) {
    const double y = Y[std::size_t(s)];
    if (y != 0.0) mu += y * sutherland(model.species(s), T);
  }
  return mu;
}

/// Viscosity, conductivity and diffusivity (scalar form, used on hot paths).
struct TransportScalars {
  double mu = 0.0;
  double k = 0.0;
  double D = 0.0;
};

inline TransportScalars transport_scalars(double rho, double T, std::span<const double> Y, double cp,
                                          const MixtureModel& model) {
  TransportScalars t;
  t.mu = mixture_viscosity(Y, T, model);
  t.k = t.mu * cp / model.Pr();
  t.D = t.mu / (rho * model.Sc());
  return t;
}

inline TransportProperties transport(const CellPrimitive& prim, const MixtureModel& model) {
  const auto s = transport_scalars(prim.rho, prim.T, prim.Y, prim.cp, model);
  return {s.mu, s.k, std::vector<double>(std::size_t(model.ns()), s.D)};
}

}  // namespace splitflow
