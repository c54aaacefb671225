#pragma once

// Analytic convective flux Jacobians dF.S/dQ. Density is an independent
// slot of Q: pressure depends on it only through the kinetic energy, while
// temperature and composition follow the partial densities.

#include <span>
#include <utility>

#include "splitflow/core/dense.hpp"
#include "splitflow/mixture/mixture.hpp"

namespace splitflow {

/// Full (5+ns) x (5+ns) Jacobian of F(Q).S, written into `A` (resized as needed).
inline void convective_jacobian(const CellPrimitive& w, const Vec3& S, const MixtureModel& model, DenseMatrix& A) {
  const int ns = model.ns(), nv = model.nv();
  if (A.rows() != nv || A.cols() != nv)
    A.resize(nv, nv);
  else
    std::fill(A.data().begin(), A.data().end(), 0.0);

  const double U = dot(w.u, S);
  const double beta = w.gamma - 1.0;
  const double ek = w.ek;
  const double H = w.h;
  const double hs = w.static_enthalpy();

  // mass
  for (int i = 0; i < 3; ++i) A(var::rho, var::mom + i) = S[i];
  // momentum
  for (int i = 0; i < 3; ++i) {
    const int r = var::mom + i;
    A(r, var::rho) = beta * ek * S[i] - U * w.u[i];
    for (int l = 0; l < 3; ++l) A(r, var::mom + l) = w.u[i] * S[l] - beta * w.u[l] * S[i];
    A(r, r) += U;
    A(r, var::energy) = beta * S[i];
  }
  // energy
  A(var::energy, var::rho) = ((w.gamma - 2.0) * ek - hs) * U;
  for (int l = 0; l < 3; ++l) A(var::energy, var::mom + l) = H * S[l] - beta * U * w.u[l];
  A(var::energy, var::energy) = w.gamma * U;
  // species columns and rows
  for (int s = 0; s < ns; ++s) {
    const int c = var::species + s;
    const double xi = w.gamma * model.R(s) * w.T - beta * model.h(s, w.T);
    for (int i = 0; i < 3; ++i) A(var::mom + i, c) = xi * S[i];
    A(var::energy, c) = xi * U;
    const double y = w.Y[std::size_t(s)];
    A(c, var::rho) = -U * y;
    for (int l = 0; l < 3; ++l) A(c, var::mom + l) = y * S[l];
    A(c, c) = U;
  }
}

inline DenseMatrix convective_jacobian(const CellPrimitive& w, const Vec3& S, const MixtureModel& model) {
  DenseMatrix A;
  convective_jacobian(w, S, model, A);
  return A;
}

/// 5x5 Jacobian of the flow fluxes with respect to (rho, rho u, rho E) at
/// frozen mass fractions. Row-major into `A` (25 entries).
inline void flow_jacobian(const CellPrimitive& w, const Vec3& S, std::span<double, 25> A) {
  const double U = dot(w.u, S);
  const double beta = w.gamma - 1.0;
  const double ek = w.ek;
  const double hs = w.static_enthalpy();
  // Frozen-Y density derivative of p: beta ek + sum_s Y_s xi_s = beta ek + gamma R T - beta hs.
  const double dp_drho = beta * ek + w.gamma * w.R * w.T - beta * hs;
  auto a = [&](int r, int c) -> double& { return A[std::size_t(5 * r + c)]; };
  std::fill(A.begin(), A.end(), 0.0);
  for (int i = 0; i < 3; ++i) a(0, 1 + i) = S[i];
  for (int i = 0; i < 3; ++i) {
    const int r = 1 + i;
    a(r, 0) = dp_drho * S[i] - U * w.u[i];
    for (int l = 0; l < 3; ++l) a(r, 1 + l) = w.u[i] * S[l] - beta * w.u[l] * S[i];
    a(r, r) += U;
    a(r, 4) = beta * S[i];
  }
  a(4, 0) = (dp_drho - w.h) * U;
  for (int l = 0; l < 3; ++l) a(4, 1 + l) = w.h * S[l] - beta * U * w.u[l];
  a(4, 4) = w.gamma * U;
}

/// A+- = (A +- lambda I) / 2.
inline std::pair<DenseMatrix, DenseMatrix> spectral_split(const DenseMatrix& A, double lambda) {
  DenseMatrix plus = A, minus = A;
  for (auto& v : plus.data()) v *= 0.5;
  for (auto& v : minus.data()) v *= 0.5;
  for (int i = 0; i < A.rows(); ++i) {
    plus(i, i) += 0.5 * lambda;
    minus(i, i) -= 0.5 * lambda;
  }
  return {std::move(plus), std::move(minus)};
}

}  // namespace splitflow
