#pragma once

#include <algorithm>
#include <cmath>
#include <utility>

#include "splitflow/mixture/mixture.hpp"

namespace splitflow {

enum class Reconstruction { first_order, muscl };

inline double minmod(double a, double b) {
  if (a * b <= 0.0) return 0.0;
  return std::abs(a) < std::abs(b) ? a : b;
}

/// Left and right face values between q_m and q_p from four consecutive cells.
inline std::pair<double, double> muscl_pair(double q_mm, double q_m, double q_p, double q_pp) {
  const double left = q_m + 0.5 * minmod(q_m - q_mm, q_p - q_m);
  const double right = q_p - 0.5 * minmod(q_p - q_m, q_pp - q_p);
  return {left, right};
}

/// MUSCL-minmod on (rho, u, p, Y); T and derived quantities are re-derived
/// from the reconstructed values.
inline void muscl_reconstruct(const CellPrimitive& mm, const CellPrimitive& m, const CellPrimitive& p,
                              const CellPrimitive& pp, const MixtureModel& model, CellPrimitive& left,
                              CellPrimitive& right) {
  auto pair = [](double a, double b, double c, double d, double& l, double& r) {
    const auto lr = muscl_pair(a, b, c, d);
    l = lr.first;
    r = lr.second;
  };
  pair(mm.rho, m.rho, p.rho, pp.rho, left.rho, right.rho);
  for (int d = 0; d < 3; ++d) pair(mm.u[d], m.u[d], p.u[d], pp.u[d], left.u[d], right.u[d]);
  double pl = 0.0, pr = 0.0;
  pair(mm.p, m.p, p.p, pp.p, pl, pr);
  const int ns = model.ns();
  left.Y.resize(std::size_t(ns));
  right.Y.resize(std::size_t(ns));
  double sl = 0.0, sr = 0.0;
  for (int s = 0; s < ns; ++s) {
    const std::size_t i = std::size_t(s);
    pair(mm.Y[i], m.Y[i], p.Y[i], pp.Y[i], left.Y[i], right.Y[i]);
    sl += left.Y[i];
    sr += right.Y[i];
  }
  if (sl != 1.0)
    for (auto& y : left.Y) y /= sl;
  if (sr != 1.0)
    for (auto& y : right.Y) y /= sr;
  left.T = pl / (left.rho * mixture_gas_constant(left.Y, model));
  right.T = pr / (right.rho * mixture_gas_constant(right.Y, model));
  if (!(left.rho > 0.0 && right.rho > 0.0 && left.T > 0.0 && right.T > 0.0))
    throw NonPhysicalState("inadmissible reconstructed face state");
  complete_from_temperature(left, model);
  complete_from_temperature(right, model);
}

}  // namespace splitflow
