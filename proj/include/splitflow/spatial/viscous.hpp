#pragma once

// Newtonian stress, Fourier conduction with species-enthalpy diffusion, and
// Fickian mass diffusion with a zero-sum correction.

#include <array>
#include <span>
#include <vector>

#include "splitflow/mixture/mixture.hpp"

namespace splitflow {

struct FaceGradients {
  std::array<Vec3, 3> grad_u{};  // grad_u[i] = gradient of velocity component i
  Vec3 grad_T{};
  std::vector<Vec3> grad_Y;
};

/// Viscous flux through S with the sign convention of the conservative
/// residual: [0, -tau.S, -(u.tau).S + q.S, J_s.S]. Overwrites `flux`.
/// `diffusion` receives the corrected species mass fluxes J_s (may be reused scratch).
inline void viscous_flux(const CellPrimitive& face, const FaceGradients& g, const Vec3& S, const MixtureModel& model,
                         std::span<double> flux, std::vector<Vec3>& diffusion) {
  const auto tr = transport_scalars(face.rho, face.T, face.Y, face.cp, model);
  const int ns = model.ns();

  const double div = g.grad_u[0].x + g.grad_u[1].y + g.grad_u[2].z;
  double tau[3][3];
  for (int i = 0; i < 3; ++i)
    for (int l = 0; l < 3; ++l) tau[i][l] = tr.mu * (g.grad_u[std::size_t(i)][l] + g.grad_u[std::size_t(l)][i]);
  for (int i = 0; i < 3; ++i) tau[i][i] -= 2.0 / 3.0 * tr.mu * div;

  diffusion.resize(std::size_t(ns));
  Vec3 total{};
  for (int s = 0; s < ns; ++s) {
    diffusion[std::size_t(s)] = (-face.rho * tr.D) * g.grad_Y[std::size_t(s)];
    total += diffusion[std::size_t(s)];
  }
  Vec3 q = (-tr.k) * g.grad_T;
  for (int s = 0; s < ns; ++s) {
    Vec3& J = diffusion[std::size_t(s)];
    J -= face.Y[std::size_t(s)] * total;
    q += model.h(s, face.T) * J;
  }

  flux[var::rho] = 0.0;
  double work = 0.0;
  for (int i = 0; i < 3; ++i) {
    const double ts = tau[i][0] * S.x + tau[i][1] * S.y + tau[i][2] * S.z;
    flux[std::size_t(var::mom + i)] = -ts;
    work += face.u[i] * ts;
  }
  flux[var::energy] = -work + dot(q, S);
  for (int s = 0; s < ns; ++s) flux[std::size_t(var::species + s)] = dot(diffusion[std::size_t(s)], S);
}

}  // namespace splitflow
