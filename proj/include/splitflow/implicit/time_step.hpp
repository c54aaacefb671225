#pragma once

#include <cmath>
#include <limits>
#include <span>

#include "splitflow/core/error.hpp"
#include "splitflow/core/types.hpp"

namespace splitflow {

/// Pseudo-time step CFL / (J sum lambda_inv + J sum lambda_vis + lambda_S).
/// lambda_inv and lambda_vis are face-flux radii (m^3/s); J is the inverse
/// cell volume; lambda_S is the source radius (1/s).
inline double local_time_step(double sum_lambda_inv, double sum_lambda_vis, double lambda_S, double cfl, double J) {
  const double denom = J * sum_lambda_inv + J * sum_lambda_vis + lambda_S;
  if (!(denom > 0.0)) throw ZeroWavespeed("zero wave speed in local time step");
  return cfl / denom;
}

/// Physical time integration of the dual-time system. order 1 is backward
/// Euler; order 2 is the three-level backward difference.
struct DualTime {
  double dt = std::numeric_limits<double>::infinity();
  int order = 1;

  bool active() const { return std::isfinite(dt); }
  /// phi in (1 + phi)(Q^m - Q^n) - phi (Q^n - Q^{n-1}).
  double phi() const { return order == 2 ? 0.5 : 0.0; }
  /// Diagonal coefficient (1 + phi) V / dt.
  double diagonal(double volume) const { return active() ? (1.0 + phi()) * volume / dt : 0.0; }

  /// Maps the configured coefficient theta (0 or 2) to the scheme order.
  static DualTime from_theta(double dt, int theta) { return {dt, theta == 2 ? 2 : 1}; }
};

/// RHS = -R - [(1 + phi)(Q^m - Q^n) - phi (Q^n - Q^{n-1})] V / dt for one cell.
/// Reduces to -R when dual time is inactive.
inline void dual_time_rhs(std::span<const double> R, std::span<const double> qm, std::span<const double> qn,
                          std::span<const double> qnm1, const DualTime& dual, double volume, std::span<double> rhs) {
  if (!dual.active()) {
    for (std::size_t v = 0; v < R.size(); ++v) rhs[v] = -R[v];
    return;
  }
  const double phi = dual.phi(), w = volume / dual.dt;
  for (std::size_t v = 0; v < R.size(); ++v)
    rhs[v] = -R[v] - w * ((1.0 + phi) * (qm[v] - qn[v]) - phi * (qn[v] - qnm1[v]));
}

}  // namespace splitflow
