#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <random>

#include "oracles.hpp"
#include "splitflow/chemistry/mechanism_io.hpp"
#include "splitflow/grid/boundary.hpp"
#include "splitflow/implicit/lusgs.hpp"
#include "splitflow/implicit/operator.hpp"
#include "support.hpp"

using namespace splitflow;
using namespace splitflow::testing;

namespace {

std::vector<double> sorted_real_eigenvalues(const Eigen::MatrixXd& A, double& max_imag) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(A, false);
  std::vector<double> ev;
  max_imag = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    ev.push_back(es.eigenvalues()[i].real());
    max_imag = std::max(max_imag, std::abs(es.eigenvalues()[i].imag()));
  }
  std::sort(ev.begin(), ev.end());
  return ev;
}

/// Uniform field on a box with all-farfield boundaries.
struct UniformCase {
  MixtureModel model;
  StructuredGrid grid;
  FlowField field;
  BoundarySet bcs;

  UniformCase(MixtureModel m, Extents ext, const Vec3& extent, const CellPrimitive& state)
      : model(std::move(m)), grid(compute_metrics(ext, generate_box(extent, ext))), field(ext, model) {
    field.fill(state, model);
    for (auto& s : bcs.sides) s = BoundaryCondition::make_farfield(state);
    apply_boundary_conditions(field, grid, bcs, model);
  }
};

CellVector random_rhs(std::size_t cells, int nv, std::uint64_t seed) {
  CellVector r(cells, nv);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (double& v : r.raw()) v = u(rng);
  return r;
}

}  // namespace

// ---------------------------------------------------------------- Jacobian

TEST(Jacobian, MatchesFiniteDifferences) {
  const auto model = air5();
  std::mt19937_64 rng(11);
  for (int n = 0; n < 100; ++n) {
    const auto w = random_state(model, rng);
    const Vec3 S = random_unit(rng);
    const auto A = to_eigen(convective_jacobian(w, S, model));
    const auto fd = fd_jacobian(prim_to_cons(w, model), S, model);
    EXPECT_LE((A - fd).cwiseAbs().maxCoeff(), 1e-6 * A.cwiseAbs().maxCoeff()) << "state " << n;
  }
}

TEST(Jacobian, HomogeneityOfDegreeOne) {
  const auto model = air5();
  std::mt19937_64 rng(12);
  std::vector<double> F(std::size_t(model.nv()));
  for (int n = 0; n < 100; ++n) {
    const auto w = random_state(model, rng);
    const Vec3 S = random_unit(rng);
    const auto A = convective_jacobian(w, S, model);
    const auto q = prim_to_cons(w, model);
    std::vector<double> AQ(q.size(), 0.0);
    gemv_add(A, q, AQ);
    physical_flux(w, S, model, F);
    double err = 0.0, scale = 0.0;
    for (std::size_t v = 0; v < q.size(); ++v) {
      err = std::max(err, std::abs(AQ[v] - F[v]));
      scale = std::max(scale, std::abs(F[v]));
    }
    EXPECT_LE(err, 1e-10 * scale);
  }
}

TEST(Jacobian, EigenvaluesAreAcousticAndConvective) {
  const auto model = air5();
  std::mt19937_64 rng(13);
  for (int n = 0; n < 100; ++n) {
    const auto w = random_state(model, rng);
    const Vec3 S = 0.3 * random_unit(rng);
    double imag = 0.0;
    const auto ev =
        sorted_real_eigenvalues(nondimensionalized(to_eigen(convective_jacobian(w, S, model)), w.rho, w.c), imag);
    const double U = dot(w.u, S), cs = w.c * norm(S), scale = std::abs(U) + cs;
    std::vector<double> expected(std::size_t(model.nv()), U);
    expected.front() = U - cs;
    expected.back() = U + cs;
    EXPECT_LE(imag, 1e-8 * scale);
    for (std::size_t i = 0; i < ev.size(); ++i) EXPECT_NEAR(ev[i], expected[i], 1e-8 * scale) << i;
    // Spectral radius dominance.
    const double rad = std::max(std::abs(ev.front()), std::abs(ev.back()));
    EXPECT_GE(inviscid_spectral_radius(w, S) * (1.0 + 1e-8), rad);
  }
}

TEST(Jacobian, FrozenFlowBlockMatchesFiniteDifferences) {
  // The 5x5 block differentiates the flow fluxes with Y held fixed, so rho_s
  // moves with rho: column 0 = dF/drho + sum_s Y_s dF/drho_s.
  const auto model = air5();
  std::mt19937_64 rng(14);
  for (int n = 0; n < 50; ++n) {
    const auto w = random_state(model, rng);
    const Vec3 S = random_unit(rng);
    std::array<double, 25> B{};
    flow_jacobian(w, S, B);
    const auto A = to_eigen(convective_jacobian(w, S, model));
    for (int r = 0; r < 5; ++r) {
      double col0 = A(r, 0);
      for (int s = 0; s < model.ns(); ++s) col0 += w.Y[std::size_t(s)] * A(r, 5 + s);
      const double scale = A.row(r).cwiseAbs().maxCoeff();
      EXPECT_NEAR(B[std::size_t(5 * r)], col0, 1e-12 * scale);
      for (int c = 1; c < 5; ++c) EXPECT_NEAR(B[std::size_t(5 * r + c)], A(r, c), 1e-12 * scale);
    }
  }
}

// ---------------------------------------------------------------- splitting

TEST(SpectralSplit, ZeroMatrix) {
  const auto [p, m] = spectral_split(DenseMatrix(3, 3), 1.0);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      EXPECT_EQ(p(i, j), i == j ? 0.5 : 0.0);
      EXPECT_EQ(m(i, j), i == j ? -0.5 : 0.0);
    }
}

TEST(SpectralSplit, SumReproducesMatrix) {
  std::mt19937_64 rng(15);
  std::normal_distribution<double> n(0.0, 10.0);
  for (int t = 0; t < 20; ++t) {
    DenseMatrix A(7, 7);
    for (double& v : A.data()) v = n(rng);
    const double lambda = 50.0 + std::abs(n(rng));
    const auto [p, m] = spectral_split(A, lambda);
    for (int i = 0; i < 7; ++i)
      for (int j = 0; j < 7; ++j) {
        if (i != j)
          EXPECT_EQ(p(i, j) + m(i, j), A(i, j));
        else  // one rounding of lambda/2 may survive on the diagonal
          EXPECT_LE(std::abs(p(i, j) + m(i, j) - A(i, j)), 2.0 * std::numeric_limits<double>::epsilon() * lambda);
      }
  }
}

TEST(SpectralSplit, EigenvalueSigns) {
  const auto model = air5();
  std::mt19937_64 rng(16);
  for (int t = 0; t < 50; ++t) {
    const auto w = random_state(model, rng);
    const Vec3 S = random_unit(rng);
    const double lambda = inviscid_spectral_radius(w, S);
    const auto A = convective_jacobian(w, S, model);
    const auto [p, m] = spectral_split(A, lambda);
    // Eigenvalue backward error scales with the matrix entries, not with lambda.
    double scale = lambda;
    for (double v : A.data()) scale = std::max(scale, std::abs(v));
    double ip = 0.0, im = 0.0;
    const auto evp = sorted_real_eigenvalues(to_eigen(p), ip);
    const auto evm = sorted_real_eigenvalues(to_eigen(m), im);
    EXPECT_GE(evp.front(), -1e-10 * scale);
    EXPECT_LE(evm.back(), 1e-10 * scale);
  }
}

// ---------------------------------------------------------------- time steps

TEST(TimeStep, LocalStepExamples) {
  EXPECT_DOUBLE_EQ(local_time_step(400.0, 0.0, 0.0, 5.0, 1.0), 0.0125);
  EXPECT_DOUBLE_EQ(local_time_step(400.0, 0.0, 0.0, 10.0, 1.0), 0.025);
  EXPECT_DOUBLE_EQ(local_time_step(400.0, 0.0, 1200.0, 5.0, 1.0), 0.0125 / 4.0);
  // Face-flux radii and inverse volume: 4e-1 m^3/s in a 1e-3 m^3 cell is 400 1/s.
  EXPECT_DOUBLE_EQ(local_time_step(0.4, 0.0, 0.0, 5.0, 1000.0), 0.0125);
  EXPECT_THROW(local_time_step(0.0, 0.0, 0.0, 5.0, 1.0), ZeroWavespeed);
}

TEST(DualTime, RightHandSideExamples) {
  const std::vector<double> R{0.3, -1.2, 2.0}, qn{1.0, 2.0, 3.0}, qnm1{0.9, 2.1, 2.5};
  std::vector<double> rhs(3);
  // Converged fixed point.
  dual_time_rhs(std::vector<double>(3, 0.0), qn, qn, qn, DualTime{1e-3, 2}, 0.5, rhs);
  for (double v : rhs) EXPECT_EQ(v, 0.0);
  // Steady mode.
  dual_time_rhs(R, qn, qn, qnm1, DualTime{}, 0.5, rhs);
  for (std::size_t v = 0; v < 3; ++v) EXPECT_EQ(rhs[v], -R[v]);
  // Backward-Euler fixed point: Q^m = Q^n - (dt / V) R.
  const double dt = 2e-3, V = 0.5;
  std::vector<double> qm(3);
  for (std::size_t v = 0; v < 3; ++v) qm[v] = qn[v] - dt / V * R[v];
  dual_time_rhs(R, qm, qn, qnm1, DualTime{dt, 1}, V, rhs);
  for (double v : rhs) EXPECT_NEAR(v, 0.0, 1e-12);
  // Second order: (3/2)(Q^m - Q^n) - (1/2)(Q^n - Q^{n-1}) = -(dt / V) R.
  for (std::size_t v = 0; v < 3; ++v) qm[v] = qn[v] + (0.5 * (qn[v] - qnm1[v]) - dt / V * R[v]) / 1.5;
  dual_time_rhs(R, qm, qn, qnm1, DualTime::from_theta(dt, 2), V, rhs);
  for (double v : rhs) EXPECT_NEAR(v, 0.0, 1e-12);
  EXPECT_EQ(DualTime::from_theta(dt, 0).order, 1);
  EXPECT_EQ(DualTime::from_theta(dt, 2).order, 2);
}

// ---------------------------------------------------------------- operators

TEST(Operator, SplitSpeciesDiagonalExample) {
  // Inviscid gas, |U| = 100, unit cell volume, dtau = 0.01, one active direction.
  SpeciesData a{"A", 0.028, 1039.0, 0.0, 0.0, 0.0}, b{"B", 0.032, 918.0, 0.0, 0.0, 0.0};
  const MixtureModel model({a, b});
  const auto w = make_primitive(1e5, 300.0, {100.0, 0.0, 0.0}, {0.5, 0.5}, model);
  UniformCase uc(model, {2, 1, 1}, {2.0, 1.0, 1.0}, w);
  const auto radii = compute_spectral_radii(uc.field, uc.grid, uc.model, true);
  const std::vector<double> dtau{0.01, 0.01};
  const SplitOperator conv(uc.field, uc.grid, uc.model, radii, dtau, {}, {}, SpeciesOffdiag::symmetrized,
                           SpeciesRadius::convective);
  for (std::size_t c = 0; c < 2; ++c)
    for (int s = 0; s < 2; ++s) EXPECT_NEAR(conv.species_diagonal(c, s), 200.0, 1e-10);
  const SplitOperator matched(uc.field, uc.grid, uc.model, radii, dtau);
  EXPECT_NEAR(matched.species_diagonal(0, 0), 200.0 + w.c, 1e-10);
  EXPECT_NEAR(matched.flow_diagonal(0), 200.0 + w.c, 1e-10);
}

TEST(Operator, CoupledSplittingIdentityOnUniformState) {
  const auto model = air5();
  const auto w = make_primitive(2e4, 700.0, {300.0, -120.0, 40.0}, {0.7, 0.2, 0.04, 0.03, 0.03}, model);
  UniformCase uc(model, {3, 3, 3}, {1.0, 1.0, 1.0}, w);
  const auto radii = compute_spectral_radii(uc.field, uc.grid, uc.model, false);
  const auto dtau = local_time_steps(radii, {}, 5.0);
  const auto blocks = materialize(CoupledOperator(uc.field, uc.grid, uc.model, radii, dtau), uc.field.extents());
  const PaddedLayout lay(uc.field.extents());
  for_each_interior(uc.field.extents(), [&](const Index3& c) {
    for (int d = 0; d < 3; ++d) {
      if (c[d] == 0) continue;
      const Index3 nb = shifted(c, d, -1);
      const double lambda = radii.face(d, c).inv_flow;
      // -lower(c) = A+, upper(nb) = A-: A+ - A- = lambda I.
      const Eigen::MatrixXd diff = -to_eigen(blocks.lower(lay.interior(c), d)) - to_eigen(blocks.upper(lay.interior(nb), d));
      const Eigen::MatrixXd ref = Eigen::MatrixXd::Identity(model.nv(), model.nv()) * lambda;
      EXPECT_LE((diff - ref).cwiseAbs().maxCoeff(), 1e-12 * lambda);
    }
  });
}

TEST(Operator, ExplicitLimit) {
  const auto model = air5();
  const auto w = make_primitive(2e4, 700.0, {300.0, -120.0, 40.0}, {0.7, 0.2, 0.04, 0.03, 0.03}, model);
  UniformCase uc(model, {4, 3, 2}, {1.0, 0.6, 0.3}, w);
  const auto radii = compute_spectral_radii(uc.field, uc.grid, uc.model, true);
  // Off-diagonal blocks carry entries up to h_s |S| ~ 1e7, so the pseudo-time
  // step must be small enough that D dominates them by 1e-8 or more.
  const auto dtau = local_time_steps(radii, {}, 1e-16);
  const auto rhs = random_rhs(uc.field.extents().cells(), model.nv(), 3);
  const SweepOrder order(uc.field.extents());
  auto check = [&](const auto& op) {
    CellVector dq;
    lusgs_solve(op, order, rhs, dq);
    for (std::size_t c = 0; c < rhs.cells(); ++c) {
      const double f = dtau[c] * radii.cells[c].J;
      for (int v = 0; v < model.nv(); ++v)
        EXPECT_NEAR(dq[c][std::size_t(v)], f * rhs[c][std::size_t(v)], 1e-8 * f);
    }
  };
  check(CoupledOperator(uc.field, uc.grid, uc.model, radii, dtau));
  check(SplitOperator(uc.field, uc.grid, uc.model, radii, dtau));
}

TEST(Operator, MaterializedBlocksGiveTheSameSweep) {
  const auto model = air5();
  std::mt19937_64 rng(17);
  const Extents ext{3, 3, 2};
  const auto grid = compute_metrics(ext, generate_box({1.0, 1.0, 0.5}, ext));
  FlowField field(ext, model);
  for_each_interior(ext, [&](const Index3& c) {
    field.primitive(c) = random_state(model, rng, 400.0);
    prim_to_cons(field.primitive(c), model, field.q(c));
  });
  BoundarySet bcs;
  for (auto& s : bcs.sides) s = BoundaryCondition::make_outflow();
  apply_boundary_conditions(field, grid, bcs, model);
  const auto mech = parse_mechanism("N2 + O <-> NO + N A=6.4e11 b=-1.0 Ea=3.16e5 Ab=1.6e7 bb=0.1 Eab=0", model);
  const auto radii = compute_spectral_radii(field, grid, model, true);
  const auto src = linearize_source(field, mech, model);
  const auto dtau = local_time_steps(radii, src, 5.0);
  const auto rhs = random_rhs(ext.cells(), model.nv(), 4);
  const SweepOrder order(ext);
  auto compare = [&](const auto& op) {
    CellVector a, b;
    lusgs_solve(op, order, rhs, a);
    lusgs_solve(materialize(op, ext), order, rhs, b);
    EXPECT_LE(max_rel_diff(flatten(a), flatten(b)), 1e-12);
    // And both equal the dense factorized solve.
    const auto g = global_blocks(materialize(op, ext));
    EXPECT_LE(max_rel_diff(flatten(a), dense_lusgs(g, flatten(rhs))), 1e-12);
  };
  compare(CoupledOperator(field, grid, model, radii, dtau, src));
  compare(SplitOperator(field, grid, model, radii, dtau, src));
  compare(SplitOperator(field, grid, model, radii, dtau, src, {}, SpeciesOffdiag::unhalved, SpeciesRadius::convective));
}

TEST(Operator, SingularDiagonalIsReported) {
  const auto model = pure_n2();
  const auto w = make_primitive(1e5, 300.0, {0.0, 0.0, 0.0}, {1.0}, model);
  UniformCase uc(model, {2, 1, 1}, {1.0, 1.0, 1.0}, w);
  auto radii = compute_spectral_radii(uc.field, uc.grid, uc.model, false);
  for (auto& c : radii.cells) c.inv_flow = {0.0, 0.0, 0.0};
  const std::vector<double> dtau{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  EXPECT_THROW(CoupledOperator(uc.field, uc.grid, uc.model, radii, dtau), SingularDiagonal);
  EXPECT_THROW(SplitOperator(uc.field, uc.grid, uc.model, radii, dtau), SingularDiagonal);
}

// ---------------------------------------------------------------- LU-SGS

TEST(Lusgs, DiagonalSystem) {
  std::mt19937_64 rng(18);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  DenseBlockOperator op({1, 1, 1}, 6);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) op.diagonal(0)(i, j) = (i == j ? 10.0 : 0.0) + u(rng);
  op.factorize();
  const auto rhs = random_rhs(1, 6, 5);
  const auto dq = lusgs_solve(op, Extents{1, 1, 1}, rhs);
  const Eigen::VectorXd ref = to_eigen(op.diagonal(0)).partialPivLu().solve(flatten(rhs));
  EXPECT_LE(max_rel_diff(flatten(dq), ref), 1e-14);
}

TEST(Lusgs, MatchesDenseFactorizedSolve) {
  const Extents ext{4, 4, 1};
  const int nv = 7;
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  DenseBlockOperator op(ext, nv);
  for (std::size_t c = 0; c < ext.cells(); ++c) {
    for (int i = 0; i < nv; ++i)
      for (int j = 0; j < nv; ++j) op.diagonal(c)(i, j) = (i == j ? 8.0 * nv : 0.0) + u(rng);
    for (int d = 0; d < 2; ++d)
      for (double& v : op.lower(c, d).data()) v = u(rng);
    for (int d = 0; d < 2; ++d)
      for (double& v : op.upper(c, d).data()) v = u(rng);
  }
  op.factorize();
  const auto rhs = random_rhs(ext.cells(), nv, 6);
  const auto dq = lusgs_solve(op, ext, rhs);
  EXPECT_LE(max_rel_diff(flatten(dq), dense_lusgs(global_blocks(op), flatten(rhs))), 1e-12);
}

TEST(Lusgs, IndexReversalWithVelocityFlip) {
  // Reversing the index and the velocity maps L onto U and back. The
  // factorization (D + L) D^-1 (D + U) is not symmetric under that swap, so
  // the reversed sweep reproduces the dense solve of (D + U) D^-1 (D + L).
  const auto model = pure_n2();
  const int n = 6;
  const Extents ext{n, 1, 1};
  const auto forward = make_primitive(1e5, 300.0, {120.0, 0.0, 0.0}, {1.0}, model);
  const auto backward = make_primitive(1e5, 300.0, {-120.0, 0.0, 0.0}, {1.0}, model);
  UniformCase fw(model, ext, {1.0, 0.1, 0.1}, forward), bw(model, ext, {1.0, 0.1, 0.1}, backward);
  const auto rhs = random_rhs(std::size_t(n), model.nv(), 7);
  CellVector rhs_rev(std::size_t(n), model.nv());
  for (int i = 0; i < n; ++i)
    for (int v = 0; v < model.nv(); ++v)
      rhs_rev[std::size_t(n - 1 - i)][std::size_t(v)] = (v == 1 ? -1.0 : 1.0) * rhs[std::size_t(i)][std::size_t(v)];

  auto solve = [&](UniformCase& uc, const CellVector& r, GlobalBlocks* g) {
    const auto radii = compute_spectral_radii(uc.field, uc.grid, uc.model, false);
    const auto dtau = local_time_steps(radii, {}, 10.0);
    const CoupledOperator op(uc.field, uc.grid, uc.model, radii, dtau);
    if (g) *g = global_blocks(materialize(op, ext));
    return lusgs_solve(op, ext, r);
  };
  GlobalBlocks g;
  solve(fw, rhs, &g);
  const auto dq_rev = solve(bw, rhs_rev, nullptr);
  // Map back to the forward orientation.
  CellVector mapped(std::size_t(n), model.nv());
  for (int i = 0; i < n; ++i)
    for (int v = 0; v < model.nv(); ++v)
      mapped[std::size_t(i)][std::size_t(v)] = (v == 1 ? -1.0 : 1.0) * dq_rev[std::size_t(n - 1 - i)][std::size_t(v)];
  const Eigen::MatrixXd M = (g.D + g.U) * g.D.inverse() * (g.D + g.L);
  const Eigen::VectorXd ref = M.partialPivLu().solve(flatten(rhs));
  EXPECT_LE(max_rel_diff(flatten(mapped), ref), 1e-12);
}

TEST(Lusgs, ZeroRightHandSideGivesZeroIncrement) {
  const auto model = air5();
  const auto w = make_primitive(2e4, 700.0, {300.0, -120.0, 40.0}, {0.7, 0.2, 0.04, 0.03, 0.03}, model);
  UniformCase uc(model, {3, 3, 3}, {1.0, 1.0, 1.0}, w);
  const auto radii = compute_spectral_radii(uc.field, uc.grid, uc.model, true);
  const auto dtau = local_time_steps(radii, {}, 50.0);
  const CellVector zero(27, model.nv());
  const SweepOrder order(uc.field.extents());
  std::vector<double> work(std::size_t(model.ns()));
  for (Scheme s : {Scheme::CI, Scheme::CS1, Scheme::CS2}) {
    CellVector dq;
    if (s == Scheme::CI)
      lusgs_solve(CoupledOperator(uc.field, uc.grid, uc.model, radii, dtau), order, zero, dq);
    else
      lusgs_solve(SplitOperator(uc.field, uc.grid, uc.model, radii, dtau), order, zero, dq);
    for (double v : dq.raw()) EXPECT_EQ(v, 0.0);
    auto q = prim_to_cons(w, model);
    const auto before = q;
    apply_increment(s, q, dq[0], model.ns(), work);
    // Flow rows are untouched; species rows may absorb the rounding defect
    // between sum rho_s and rho of the stored state.
    for (std::size_t v = 0; v < q.size(); ++v)
      if (v >= std::size_t(var::species))
        EXPECT_NEAR(q[v], before[v], 1e-15 * before[0]);
      else
        EXPECT_EQ(q[v], before[v]);
  }
}

// ---------------------------------------------------------------- corrections

TEST(Correction, HandExamples) {
  const std::vector<double> rs{0.5, 0.5}, d{0.06, 0.03};
  std::vector<double> out(2);
  correct_increment_cs1(rs, 1.0, d, 0.1, out);
  EXPECT_NEAR(out[0], 0.565, 1e-15);
  EXPECT_NEAR(out[1], 0.535, 1e-15);
  EXPECT_NEAR(out[0] + out[1], 1.1, 1e-15);
  correct_normalize_cs2(rs, 1.0, d, 0.1, out);
  EXPECT_NEAR(out[0], 1.1 * 0.56 / 1.09, 1e-15);
  EXPECT_NEAR(out[1], 1.1 * 0.53 / 1.09, 1e-15);
  EXPECT_NEAR(out[0], 0.565138, 5e-7);
  EXPECT_NEAR(out[1], 0.534862, 5e-7);
  EXPECT_NEAR(out[0] + out[1], 1.1, 1e-15);
}

TEST(Correction, FixedPointsAndDegenerateCases) {
  const std::vector<double> rs{0.3, 0.2, 0.5}, consistent{0.01, -0.02, 0.04};
  std::vector<double> out(3);
  using Fn = void (*)(std::span<const double>, double, std::span<const double>, double, std::span<double>, double);
  for (Fn f : {Fn(correct_increment_cs1), Fn(correct_normalize_cs2)}) {
    auto fn = [f](std::span<const double> a, double b, std::span<const double> c, double d, std::span<double> o) {
      f(a, b, c, d, o, kNegativeFractionTolerance);
    };
    fn(rs, 1.0, consistent, 0.03, out);
    for (int s = 0; s < 3; ++s) EXPECT_NEAR(out[std::size_t(s)], rs[std::size_t(s)] + consistent[std::size_t(s)], 1e-15);
    fn(rs, 1.0, std::vector<double>(3, 0.0), 0.0, out);
    for (int s = 0; s < 3; ++s) EXPECT_EQ(out[std::size_t(s)], rs[std::size_t(s)]);
    std::vector<double> one(1);
    fn(std::vector<double>{0.8}, 0.8, std::vector<double>{0.05}, 0.02, one);
    EXPECT_DOUBLE_EQ(one[0], 0.82);
  }
  EXPECT_THROW(correct_increment_cs1(rs, 1.0, std::vector<double>{-0.5, 0.0, 0.0}, 0.0, out), NonPhysicalState);
  EXPECT_THROW(correct_normalize_cs2(rs, 1.0, std::vector<double>{-0.5, 0.0, 0.0}, 0.0, out), NonPhysicalState);
  EXPECT_THROW(correct_increment_cs1(rs, 1.0, consistent, -1.5, out), NonPhysicalState);
}

TEST(Correction, ConservationAndNoDrift) {
  std::mt19937_64 rng(20);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (Scheme scheme : {Scheme::CS1, Scheme::CS2}) {
    std::vector<double> rs{0.4, 0.3, 0.2, 0.1};
    double rho = 1.0;
    std::vector<double> d(4), out(4);
    double worst_sum = 0.0, worst_cons = 0.0;
    for (int step = 0; step < 10000; ++step) {
      double drho = 0.01 * rho * u(rng);
      for (int s = 0; s < 4; ++s) d[std::size_t(s)] = 0.01 * rs[std::size_t(s)] * u(rng);
      if (scheme == Scheme::CS1)
        correct_increment_cs1(rs, rho, d, drho, out);
      else
        correct_normalize_cs2(rs, rho, d, drho, out);
      double sum = 0.0;
      for (double v : out) sum += v;
      worst_cons = std::max(worst_cons, std::abs(sum - (rho + drho)) / (rho + drho));
      rho += drho;
      rs = out;
      double ysum = 0.0;
      for (double v : rs) ysum += v / rho;
      worst_sum = std::max(worst_sum, std::abs(ysum - 1.0));
    }
    EXPECT_LE(worst_cons, 1e-14) << to_string(scheme);
    EXPECT_LE(worst_sum, 1e-12) << to_string(scheme);
  }
}
