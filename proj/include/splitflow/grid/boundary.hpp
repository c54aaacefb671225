#pragma once

// Ghost-cell boundary conditions. Ghost states are written for the
// tangential interior range of each boundary; corner ghosts are unused.

#include <array>
#include <optional>
#include <string>

#include "splitflow/grid/grid.hpp"
#include "splitflow/spatial/field.hpp"

namespace splitflow {

enum class BcKind { farfield, supersonic_outflow, noslip_isothermal, symmetry, periodic };

inline const char* to_string(BcKind k) {
  switch (k) {
    case BcKind::farfield: return "farfield";
    case BcKind::supersonic_outflow: return "supersonic_outflow";
    case BcKind::noslip_isothermal: return "noslip_isothermal";
    case BcKind::symmetry: return "symmetry";
    case BcKind::periodic: return "periodic";
  }
  return "?";
}

struct BoundaryCondition {
  BcKind kind = BcKind::farfield;
  CellPrimitive farfield;         // farfield only
  double wall_temperature = 0.0;  // noslip_isothermal only

  static BoundaryCondition make_farfield(CellPrimitive state) { return {BcKind::farfield, std::move(state), 0.0}; }
  static BoundaryCondition make_outflow() { return {BcKind::supersonic_outflow, {}, 0.0}; }
  static BoundaryCondition make_wall(double T_w) { return {BcKind::noslip_isothermal, {}, T_w}; }
  static BoundaryCondition make_symmetry() { return {BcKind::symmetry, {}, 0.0}; }
  static BoundaryCondition make_periodic() { return {BcKind::periodic, {}, 0.0}; }
};

/// Boundary sides indexed 2*d + (high side).
enum Side : int { imin = 0, imax = 1, jmin = 2, jmax = 3, kmin = 4, kmax = 5 };

inline const char* side_name(int side) {
  static const char* names[] = {"imin", "imax", "jmin", "jmax", "kmin", "kmax"};
  return names[side];
}

struct BoundarySet {
  std::array<std::optional<BoundaryCondition>, 6> sides;

  const BoundaryCondition& at(int side) const {
    if (!sides[std::size_t(side)]) throw MissingBC(std::string("no boundary condition on ") + side_name(side));
    return *sides[std::size_t(side)];
  }

  void validate() const {
    for (int s = 0; s < 6; ++s) {
      const auto& bc = at(s);
      if (bc.kind == BcKind::noslip_isothermal && !(bc.wall_temperature > 0.0))
        throw ValidationError({std::string("wall temperature on ") + side_name(s) + " must be positive"});
      if (bc.kind == BcKind::farfield && !(bc.farfield.rho > 0.0 && bc.farfield.T > 0.0 && bc.farfield.p > 0.0))
        throw ValidationError({std::string("farfield state on ") + side_name(s) + " is not admissible"});
    }
    for (int d = 0; d < 3; ++d)
      if ((at(2 * d).kind == BcKind::periodic) != (at(2 * d + 1).kind == BcKind::periodic))
        throw ValidationError({"periodic boundaries must be paired in direction " + std::to_string(d)});
  }

  bool has_wall() const {
    for (const auto& s : sides)
      if (s && s->kind == BcKind::noslip_isothermal) return true;
    return false;
  }
};

inline void apply_boundary_conditions(FlowField& field, const StructuredGrid& grid, const BoundarySet& bcs,
                                      const MixtureModel& model) {
  bcs.validate();
  const Extents& ext = field.extents();
  for (int d = 0; d < 3; ++d) {
    const int n = ext[d];
    for (int hi = 0; hi < 2; ++hi) {
      const BoundaryCondition& bc = bcs.at(2 * d + hi);
      const int t1 = (d + 1) % 3, t2 = (d + 2) % 3;
      for (int b = 0; b < ext[t2]; ++b)
        for (int a = 0; a < ext[t1]; ++a) {
          Index3 base;
          base[t1] = a;
          base[t2] = b;
          base[d] = hi ? n - 1 : 0;
          const int out = hi ? 1 : -1;
          const Index3 face_cell = hi ? shifted(base, d, 1) : base;
          for (int layer = 1; layer <= kGhost; ++layer) {
            const Index3 ghost = shifted(base, d, out * layer);
            const int depth = std::min(layer - 1, n - 1);
            const Index3 mirror = shifted(base, d, -out * depth);
            CellPrimitive& g = field.primitive(ghost);
            switch (bc.kind) {
              case BcKind::farfield:
                g = bc.farfield;
                break;
              case BcKind::supersonic_outflow:
                g = field.primitive(base);
                break;
              case BcKind::noslip_isothermal: {
                const CellPrimitive& in = field.primitive(mirror);
                const double T_w = bc.wall_temperature;
                g.Y = in.Y;
                g.u = -in.u;
                g.T = std::max(2.0 * T_w - in.T, 0.1 * T_w);
                g.rho = in.p / (mixture_gas_constant(in.Y, model) * g.T);
                complete_from_temperature(g, model);
                break;
              }
              case BcKind::symmetry: {
                const CellPrimitive& in = field.primitive(mirror);
                const Vec3 s = grid.face_area(d, face_cell);
                const Vec3 nrm = s * (1.0 / norm(s));
                g = in;
                g.u = in.u - 2.0 * dot(in.u, nrm) * nrm;
                break;
              }
              case BcKind::periodic: {
                Index3 src = ghost;
                src[d] = ((ghost[d] % n) + n) % n;
                g = field.primitive(src);
                break;
              }
            }
            prim_to_cons(g, model, field.q(ghost));
          }
        }
    }
  }
}

}  // namespace splitflow
