#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <random>

#include "splitflow/grid/boundary.hpp"
#include "splitflow/grid/grid.hpp"
#include "splitflow/grid/plot3d.hpp"
#include "support.hpp"

using namespace splitflow;

namespace {

double closure_defect(const StructuredGrid& g, const Index3& c) {
  Vec3 sum{};
  double scale = 0.0;
  for (int d = 0; d < 3; ++d) {
    sum += g.face_area(d, shifted(c, d, 1)) - g.face_area(d, c);
    scale = std::max(scale, norm(g.face_area(d, c)));
  }
  return norm(sum) / scale;
}

CylinderSpec cylinder(int ni = 32, int nj = 32, double first = 0.0) {
  CylinderSpec s;
  s.dims = {ni, nj, 1};
  s.first_cell = first;
  return s;
}

}  // namespace

TEST(Metrics, UniformBox) {
  const auto nodes = generate_box({1, 1, 1}, {10, 10, 10});
  EXPECT_EQ(nodes.size(), 1331u);
  EXPECT_NEAR(nodes[1].x - nodes[0].x, 0.1, 1e-15);
  const auto g = compute_metrics({10, 10, 10}, nodes);
  for_each_interior(g.extents(), [&](const Index3& c) {
    EXPECT_NEAR(g.jacobian(c), 1000.0, 1e-9);
    EXPECT_NEAR(g.volume(c), 1e-3, 1e-15);
    for (int d = 0; d < 3; ++d) {
      const Vec3 S = g.face_area(d, c);
      for (int e = 0; e < 3; ++e) EXPECT_NEAR(S[e], e == d ? 0.01 : 0.0, 1e-16);
    }
  });
}

TEST(Metrics, ClosedCellsOnBoxAndCylinder) {
  const auto box = compute_metrics({4, 3, 2}, generate_box({1.0, 2.0, 0.5}, {4, 3, 2}));
  for_each_interior(box.extents(), [&](const Index3& c) { EXPECT_LE(closure_defect(box, c), 1e-12); });
  const auto cyl = compute_metrics({32, 32, 1}, generate_cylinder_ogrid(cylinder(32, 32, 2e-4)));
  for_each_interior(cyl.extents(), [&](const Index3& c) {
    EXPECT_LE(closure_defect(cyl, c), 1e-12);
    EXPECT_GT(cyl.jacobian(c), 0.0);
  });
}

TEST(Metrics, DistortedHexahedraAreClosed) {
  auto nodes = generate_box({1, 1, 1}, {3, 3, 3});
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> jitter(-0.05, 0.05);
  for (auto& n : nodes) n += Vec3{jitter(rng), jitter(rng), jitter(rng)};
  const auto g = compute_metrics({3, 3, 3}, nodes);
  double total = 0.0;
  for_each_interior(g.extents(), [&](const Index3& c) {
    EXPECT_LE(closure_defect(g, c), 1e-12);
    total += g.volume(c);
  });
  EXPECT_GT(total, 0.5);
}

TEST(Metrics, SharedFacesAreIdentical) {
  const auto g = compute_metrics({8, 6, 1}, generate_cylinder_ogrid(cylinder(8, 6)));
  // The low face of (i+1) and the high face of i are the same stored vector.
  const Index3 c{3, 2, 0};
  EXPECT_EQ(&g.face_area(0, shifted(c, 0, 1)), &g.face_area(0, shifted(shifted(c, 0, 1), 0, 0)));
  EXPECT_EQ(g.cell_area(0, c), 0.5 * (g.face_area(0, c) + g.face_area(0, shifted(c, 0, 1))));
}

TEST(Metrics, InvertedCellThrows) {
  auto nodes = generate_box({1, 1, 1}, {1, 1, 1});
  // Swapping the i = 0 and i = 1 node layers mirrors the cell.
  for (std::size_t n = 0; n < 8; n += 2) std::swap(nodes[n], nodes[n + 1]);
  EXPECT_THROW(compute_metrics({1, 1, 1}, nodes), DegenerateCell);
  EXPECT_THROW(compute_metrics({2, 1, 1}, nodes), BadDims);
}

TEST(Generators, CylinderWallRadius) {
  const auto spec = cylinder();
  const auto nodes = generate_cylinder_ogrid(spec);
  for (int k = 0; k <= 1; ++k)
    for (int i = 0; i <= 32; ++i) {
      const Vec3& p = nodes[std::size_t(i + 33 * 33 * k)];
      EXPECT_NEAR(std::hypot(p.x, p.y), 0.045, 1e-12);
    }
  const auto g = compute_metrics(spec.dims, nodes);
  EXPECT_GT(g.jacobian({0, 0, 0}), 0.0);
}

TEST(Generators, UniformAndClusteredRadialSpacing) {
  auto spec = cylinder(8, 10);
  spec.stretch_ratio = 1.0;
  auto nodes = generate_cylinder_ogrid(spec);
  const double dr = (spec.outer_radius - spec.radius) / 10;
  for (int j = 0; j < 10; ++j) {
    const double r0 = norm(nodes[std::size_t(9 * j)]), r1 = norm(nodes[std::size_t(9 * (j + 1))]);
    EXPECT_NEAR(r1 - r0, dr, 1e-12);
  }
  spec.first_cell = 1e-4;
  nodes = generate_cylinder_ogrid(spec);
  EXPECT_NEAR(norm(nodes[9]) - norm(nodes[0]), 1e-4, 1e-10);
  EXPECT_NEAR(norm(nodes[90]), spec.outer_radius, 1e-12);
}

TEST(Generators, BadDims) {
  EXPECT_THROW(generate_box({1, 1, 1}, {0, 1, 1}), BadDims);
  EXPECT_THROW(generate_cylinder_ogrid(cylinder(1, 4)), BadDims);
  auto spec = cylinder();
  spec.outer_radius = 0.01;
  EXPECT_THROW(generate_cylinder_ogrid(spec), BadDims);
  EXPECT_THROW(generate_cylinder_ogrid(cylinder(8, 8, 1.0)), BadDims);
}

TEST(Plot3d, RoundTrip) {
  const Extents ext{3, 2, 4};
  const auto nodes = generate_box({1.5, 2.0, 0.25}, ext);
  const auto tmp = std::filesystem::temp_directory_path() / "splitflow_roundtrip.xyz";
  write_plot3d(tmp.string(), ext, nodes);
  const auto block = read_plot3d(tmp.string());
  std::filesystem::remove(tmp);
  EXPECT_EQ(block.cells, ext);
  EXPECT_EQ(block.nodes, nodes);
}

TEST(Plot3d, SingleBlockWithoutCountAndErrors) {
  EXPECT_NO_THROW(parse_plot3d("2 2 2\n0 1 0 1 0 1 0 1\n0 0 1 1 0 0 1 1\n0 0 0 0 1 1 1 1\n"));
  const std::string full = format_plot3d({1, 1, 1}, generate_box({1, 1, 1}, {1, 1, 1}));
  try {
    parse_plot3d(full.substr(0, full.size() / 2));
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_GT(e.byte_offset(), 0u);
  }
  EXPECT_THROW(parse_plot3d("2\n2 2 2\n2 2 2\n"), MultiBlockUnsupported);
  EXPECT_THROW(parse_plot3d("1\n2 2 x\n"), ParseError);
  EXPECT_THROW(parse_plot3d(full + " 7"), ParseError);
}

namespace {

struct BcFixture {
  MixtureModel model = splitflow::testing::air5();
  StructuredGrid grid = compute_metrics({4, 3, 1}, generate_cylinder_ogrid(cylinder(4, 3)));
  CellPrimitive inf = make_primitive(476.0, 901.0, {1000.0, 0, 0}, {0.75, 0.23, 0.01, 0.005, 0.005}, model);
  FlowField field{grid.extents(), model};
};

}  // namespace

TEST(Boundary, FarfieldFreestreamConsistency) {
  BcFixture f;
  f.field.fill(f.inf, f.model);
  BoundarySet bcs;
  for (auto& s : bcs.sides) s = BoundaryCondition::make_farfield(f.inf);
  apply_boundary_conditions(f.field, f.grid, bcs, f.model);
  const auto q = prim_to_cons(f.inf, f.model);
  for (int layer = 1; layer <= kGhost; ++layer) {
    const auto g = f.field.q(-layer, 1, 0);
    for (std::size_t v = 0; v < q.size(); ++v) EXPECT_EQ(g[v], q[v]);
    const auto h = f.field.q(1, 2 + layer, 0);
    for (std::size_t v = 0; v < q.size(); ++v) EXPECT_EQ(h[v], q[v]);
  }
}

TEST(Boundary, IsothermalWall) {
  BcFixture f;
  auto inner = f.inf;
  inner.u = {30.0, -12.0, 0.0};
  inner.T = 300.0;
  complete_from_temperature(inner, f.model);
  f.field.fill(inner, f.model);
  BoundarySet bcs;
  bcs.sides[imin] = bcs.sides[imax] = BoundaryCondition::make_outflow();
  bcs.sides[jmin] = BoundaryCondition::make_wall(300.0);
  bcs.sides[jmax] = BoundaryCondition::make_farfield(f.inf);
  bcs.sides[kmin] = bcs.sides[kmax] = BoundaryCondition::make_symmetry();
  apply_boundary_conditions(f.field, f.grid, bcs, f.model);
  const auto& g = f.field.primitive({2, -1, 0});
  EXPECT_DOUBLE_EQ(g.T, 300.0);
  EXPECT_DOUBLE_EQ(g.p, inner.p);
  EXPECT_EQ(g.Y, inner.Y);
  const Vec3 face_u = 0.5 * (g.u + inner.u);
  EXPECT_EQ(norm(face_u), 0.0);

  // Interior hotter than the wall: ghost mirrors the temperature about T_w.
  f.field.primitive({2, 0, 0}).T = 500.0;
  complete_from_temperature(f.field.primitive({2, 0, 0}), f.model);
  apply_boundary_conditions(f.field, f.grid, bcs, f.model);
  EXPECT_DOUBLE_EQ(f.field.primitive({2, -1, 0}).T, 100.0);
  f.field.primitive({2, 0, 0}).T = 900.0;
  complete_from_temperature(f.field.primitive({2, 0, 0}), f.model);
  apply_boundary_conditions(f.field, f.grid, bcs, f.model);
  EXPECT_DOUBLE_EQ(f.field.primitive({2, -1, 0}).T, 30.0);  // floored at 0.1 T_w
}

TEST(Boundary, SymmetryPeriodicAndMissing) {
  BcFixture f;
  const PaddedLayout& lay = f.field.layout();
  for_each_interior(f.field.extents(), [&](const Index3& c) {
    auto w = f.inf;
    w.u = {100.0 + c.i, 10.0 * c.j, 5.0};
    complete_from_temperature(w, f.model);
    f.field.primitive(c) = w;
  });
  (void)lay;
  BoundarySet bcs;
  bcs.sides[imin] = bcs.sides[imax] = BoundaryCondition::make_periodic();
  bcs.sides[jmin] = bcs.sides[jmax] = BoundaryCondition::make_outflow();
  bcs.sides[kmin] = bcs.sides[kmax] = BoundaryCondition::make_symmetry();
  apply_boundary_conditions(f.field, f.grid, bcs, f.model);
  EXPECT_EQ(f.field.primitive({-1, 1, 0}).u.x, f.field.primitive({3, 1, 0}).u.x);
  EXPECT_EQ(f.field.primitive({5, 1, 0}).u.x, f.field.primitive({1, 1, 0}).u.x);
  EXPECT_DOUBLE_EQ(f.field.primitive({1, 1, -1}).u.z, -5.0);
  EXPECT_DOUBLE_EQ(f.field.primitive({1, 1, 1}).u.z, -5.0);

  BoundarySet missing = bcs;
  missing.sides[jmax].reset();
  EXPECT_THROW(apply_boundary_conditions(f.field, f.grid, missing, f.model), MissingBC);
  BoundarySet unpaired = bcs;
  unpaired.sides[imax] = BoundaryCondition::make_outflow();
  EXPECT_THROW(apply_boundary_conditions(f.field, f.grid, unpaired, f.model), ValidationError);
  BoundarySet cold = bcs;
  cold.sides[jmin] = BoundaryCondition::make_wall(0.0);
  EXPECT_THROW(apply_boundary_conditions(f.field, f.grid, cold, f.model), ValidationError);
}
