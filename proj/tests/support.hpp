#pragma once

#include <random>
#include <vector>

#include "splitflow/mixture/mixture.hpp"

namespace splitflow::testing {

inline SpeciesData species(std::string name, double M, double atoms_factor, double hf = 0.0, double mu_ref = 1.716e-5) {
  SpeciesData s;
  s.name = std::move(name);
  s.M = M;
  s.cp = atoms_factor * kUniversalGasConstant / M;
  s.hf = hf;
  s.T_ref = 298.15;
  s.mu_ref = mu_ref;
  return s;
}

/// Five-species air with constant heat capacities (3.5 R for molecules, 2.5 R for atoms).
inline MixtureModel air5() {
  return MixtureModel({species("N2", 0.0280134, 3.5), species("O2", 0.0319988, 3.5),
                       species("NO", 0.0300061, 3.5, 3.00906e6), species("N", 0.0140067, 2.5, 3.36213e7),
                       species("O", 0.0159994, 2.5, 1.54297e7)});
}

inline MixtureModel pure_n2(double cp = 1039.0) {
  SpeciesData s{"N2", 0.028, cp, 0.0, 0.0, 1.716e-5};
  return MixtureModel({s});
}

/// Random admissible primitive state.
inline CellPrimitive random_state(const MixtureModel& model, std::mt19937_64& rng, double umax = 800.0) {
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::vector<double> Y(std::size_t(model.ns()));
  double sum = 0.0;
  for (auto& y : Y) sum += (y = 0.05 + uni(rng));
  for (auto& y : Y) y /= sum;
  const Vec3 u{umax * (2 * uni(rng) - 1), umax * (2 * uni(rng) - 1), umax * (2 * uni(rng) - 1)};
  return make_primitive(1e3 + 1e5 * uni(rng), 200.0 + 3000.0 * uni(rng), u, Y, model);
}

inline Vec3 random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Vec3 v{n(rng), n(rng), n(rng)};
  return v * (1.0 / norm(v));
}

}  // namespace splitflow::testing
