#pragma once

#include <vector>

#include "splitflow/core/types.hpp"
#include "splitflow/mixture/mixture.hpp"

namespace splitflow {

/// Conservative state plus its primitive decoding, both over the padded block.
struct FlowField {
  CellField q;
  std::vector<CellPrimitive> prim;

  FlowField() = default;
  FlowField(Extents ext, const MixtureModel& model) : q(ext, model.nv()), prim(q.layout().padded_cells()) {}

  const PaddedLayout& layout() const { return q.layout(); }
  const Extents& extents() const { return q.extents(); }

  CellPrimitive& primitive(const Index3& c) { return prim[layout().padded(c)]; }
  const CellPrimitive& primitive(const Index3& c) const { return prim[layout().padded(c)]; }

  /// Sets every interior cell to the given primitive state.
  void fill(const CellPrimitive& state, const MixtureModel& model) {
    const auto qs = prim_to_cons(state, model);
    for_each_interior(extents(), [&](const Index3& c) {
      std::copy(qs.begin(), qs.end(), q(c).begin());
      primitive(c) = state;
    });
  }

  /// Re-derives interior primitives from q. NonPhysicalState carries the
  /// flat interior index of the offending cell.
  void decode(const MixtureModel& model) {
    for_each_interior(extents(), [&](const Index3& c) {
      try {
        cons_to_prim(q(c), model, primitive(c));
      } catch (const NonPhysicalState& e) {
        throw NonPhysicalState(e.what(), long(layout().interior(c)));
      }
    });
  }
};

}  // namespace splitflow
