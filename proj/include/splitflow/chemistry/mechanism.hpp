#pragma once

// Finite-rate mass-action kinetics with Arrhenius coefficients.

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "splitflow/core/dense.hpp"
#include "splitflow/mixture/mixture.hpp"

namespace splitflow {

struct Arrhenius {
  double A = 0.0;   // units consistent with mol/m^3 concentrations
  double b = 0.0;   // temperature exponent
  double Ea = 0.0;  // J/mol

  double rate_constant(double T) const { return A * std::pow(T, b) * std::exp(-Ea / (kUniversalGasConstant * T)); }
};

struct Reaction {
  std::vector<int> reactant_stoich;  // nu'_s, one entry per species
  std::vector<int> product_stoich;   // nu''_s
  Arrhenius forward;
  std::optional<Arrhenius> backward;
};

struct Mechanism {
  std::vector<Reaction> reactions;
  bool enabled = true;

  bool active() const { return enabled && !reactions.empty(); }
};

/// Checks stoichiometry against the mixture; throws ValidationError.
inline void validate_mechanism(const Mechanism& mech, const MixtureModel& model) {
  std::vector<std::string> errors;
  for (std::size_t r = 0; r < mech.reactions.size(); ++r) {
    const auto& rx = mech.reactions[r];
    const std::string tag = "reaction " + std::to_string(r + 1);
    if (rx.reactant_stoich.size() != std::size_t(model.ns()) || rx.product_stoich.size() != std::size_t(model.ns())) {
      errors.push_back(tag + ": stoichiometry does not match species count");
      continue;
    }
    double lhs = 0.0, rhs = 0.0;
    for (int s = 0; s < model.ns(); ++s) {
      if (rx.reactant_stoich[std::size_t(s)] < 0 || rx.product_stoich[std::size_t(s)] < 0)
        errors.push_back(tag + ": negative stoichiometric coefficient");
      lhs += rx.reactant_stoich[std::size_t(s)] * model.species(s).M;
      rhs += rx.product_stoich[std::size_t(s)] * model.species(s).M;
    }
    if (std::abs(lhs - rhs) > 1e-12 * std::max(lhs, rhs)) errors.push_back(tag + ": mass is not balanced");
  }
  if (!errors.empty()) throw ValidationError(errors);
}

/// omega_s in kg/(m^3 s) from temperature and molar concentrations (mol/m^3).
inline void production_rates_from_concentrations(double T, std::span<const double> conc, const Mechanism& mech,
                                                 const MixtureModel& model, std::span<double> omega) {
  const int ns = model.ns();
  std::fill(omega.begin(), omega.begin() + ns, 0.0);
  if (!mech.active()) return;
  for (const auto& rx : mech.reactions) {
    double rf = rx.forward.rate_constant(T);
    double rb = rx.backward ? rx.backward->rate_constant(T) : 0.0;
    for (int s = 0; s < ns; ++s) {
      const double x = std::max(conc[std::size_t(s)], 0.0);
      if (const int nu = rx.reactant_stoich[std::size_t(s)]; nu > 0) rf *= std::pow(x, nu);
      if (rx.backward)
        if (const int nu = rx.product_stoich[std::size_t(s)]; nu > 0) rb *= std::pow(x, nu);
    }
    const double net = rf - rb;
    for (int s = 0; s < ns; ++s) {
      const int dnu = rx.product_stoich[std::size_t(s)] - rx.reactant_stoich[std::size_t(s)];
      if (dnu != 0) omega[std::size_t(s)] += model.species(s).M * double(dnu) * net;
    }
  }
}

inline void production_rates(const CellPrimitive& prim, const Mechanism& mech, const MixtureModel& model,
                             std::span<double> omega) {
  const int ns = model.ns();
  if (!mech.active()) {
    std::fill(omega.begin(), omega.begin() + ns, 0.0);
    return;
  }
  std::vector<double> conc(static_cast<std::size_t>(ns));
  for (int s = 0; s < ns; ++s) conc[std::size_t(s)] = prim.rho * prim.Y[std::size_t(s)] / model.species(s).M;
  production_rates_from_concentrations(prim.T, conc, mech, model, omega);
}

inline std::vector<double> production_rates(const CellPrimitive& prim, const Mechanism& mech,
                                            const MixtureModel& model) {
  std::vector<double> omega(std::size_t(model.ns()));
  production_rates(prim, mech, model, omega);
  return omega;
}

/// d(omega_s)/d(rho Y_r) at frozen temperature, by central differences.
inline DenseMatrix source_jacobian(const CellPrimitive& prim, const Mechanism& mech, const MixtureModel& model) {
  const int ns = model.ns();
  DenseMatrix jac(ns, ns);
  if (!mech.active()) return jac;
  const auto n = static_cast<std::size_t>(ns);
  std::vector<double> rho_s(n), conc(n), wp(n), wm(n);
  for (int s = 0; s < ns; ++s) rho_s[std::size_t(s)] = prim.rho * prim.Y[std::size_t(s)];
  for (int r = 0; r < ns; ++r) {
    const double h = std::max(1e-8 * std::abs(rho_s[std::size_t(r)]), 1e-12 * prim.rho);
    for (int s = 0; s < ns; ++s) conc[std::size_t(s)] = rho_s[std::size_t(s)] / model.species(s).M;
    conc[std::size_t(r)] = (rho_s[std::size_t(r)] + h) / model.species(r).M;
    production_rates_from_concentrations(prim.T, conc, mech, model, wp);
    conc[std::size_t(r)] = (rho_s[std::size_t(r)] - h) / model.species(r).M;
    production_rates_from_concentrations(prim.T, conc, mech, model, wm);
    for (int s = 0; s < ns; ++s) jac(s, r) = (wp[std::size_t(s)] - wm[std::size_t(s)]) / (2.0 * h);
  }
  return jac;
}

/// Row-sum bound on the spectral radius of the source Jacobian.
inline double source_spectral_radius(const DenseMatrix& jac) {
  double lam = 0.0;
  for (int s = 0; s < jac.rows(); ++s) {
    double row = 0.0;
    for (int r = 0; r < jac.cols(); ++r) row += std::abs(jac(s, r));
    lam = std::max(lam, row);
  }
  return lam;
}

}  // namespace splitflow
