#pragma once

// Independent reference computations shared by the unit and acceptance tests.

#include <Eigen/Dense>

#include <cmath>
#include <vector>

#include "splitflow/implicit/operator.hpp"
#include "splitflow/mixture/mixture.hpp"

namespace splitflow::testing {

/// F(Q).S evaluated directly from a conservative vector whose density slot
/// is independent of the partial densities: T closes the internal energy
/// sum_s rho_s e_s(T) = rho E - |m|^2 / (2 rho).
inline std::vector<double> flux_of_q(const std::vector<double>& q, const Vec3& S, const MixtureModel& model) {
  const int ns = model.ns();
  const double rho = q[0];
  const Vec3 m{q[1], q[2], q[3]};
  double a = 0.0, b = 0.0, rR = 0.0;
  for (int s = 0; s < ns; ++s) {
    const double rs = q[std::size_t(5 + s)];
    a += rs * model.e0(s);
    b += rs * model.cv(s);
    rR += rs * model.R(s);
  }
  const double T = (q[4] - 0.5 * dot(m, m) / rho - a) / b;
  const double p = rR * T;
  const double mS = dot(m, S);
  std::vector<double> f(q.size());
  f[0] = mS;
  for (int i = 0; i < 3; ++i) f[std::size_t(1 + i)] = m[i] * mS / rho + p * S[i];
  f[4] = (q[4] + p) * mS / rho;
  for (int s = 0; s < ns; ++s) f[std::size_t(5 + s)] = q[std::size_t(5 + s)] * mS / rho;
  return f;
}

/// Central finite-difference Jacobian of flux_of_q with a relative step per
/// component (floored by a physical scale of that component).
inline Eigen::MatrixXd fd_jacobian(const std::vector<double>& q, const Vec3& S, const MixtureModel& model,
                                   double rel = 1e-7) {
  const int nv = int(q.size());
  const double rho = q[0];
  const double mom_scale = std::sqrt(q[1] * q[1] + q[2] * q[2] + q[3] * q[3]) + rho;
  Eigen::MatrixXd J(nv, nv);
  for (int j = 0; j < nv; ++j) {
    double floor = rho;
    if (j >= 1 && j <= 3) floor = mom_scale;
    if (j == 4) floor = std::abs(q[4]);
    const double h = rel * std::max(std::abs(q[std::size_t(j)]), floor);
    auto qp = q, qm = q;
    qp[std::size_t(j)] += h;
    qm[std::size_t(j)] -= h;
    const auto fp = flux_of_q(qp, S, model), fm = flux_of_q(qm, S, model);
    for (int i = 0; i < nv; ++i) J(i, j) = (fp[std::size_t(i)] - fm[std::size_t(i)]) / (2.0 * h);
  }
  return J;
}

inline Eigen::MatrixXd to_eigen(const DenseMatrix& m) {
  Eigen::MatrixXd out(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) out(i, j) = m(i, j);
  return out;
}

/// D^-1 A D with D = diag(rho, rho c (x3), rho c^2, rho (x ns)): an exact
/// similarity that puts every row in the same units, so a numerical
/// eigensolver sees a well-scaled matrix. Eigenvalues are unchanged.
inline Eigen::MatrixXd nondimensionalized(const Eigen::MatrixXd& A, double rho, double c) {
  Eigen::VectorXd d = Eigen::VectorXd::Constant(A.rows(), rho);
  for (int i = 1; i <= 3; ++i) d(i) = rho * c;
  d(4) = rho * c * c;
  return d.cwiseInverse().asDiagonal() * A * d.asDiagonal();
}

/// Global D, L and U matrices of a block operator (cells in interior order).
struct GlobalBlocks {
  Eigen::MatrixXd D, L, U;
};

inline GlobalBlocks global_blocks(const DenseBlockOperator& op) {
  const Extents& ext = op.extents();
  const PaddedLayout lay(ext);
  const int nv = op.nv();
  const int n = int(ext.cells()) * nv;
  GlobalBlocks g{Eigen::MatrixXd::Zero(n, n), Eigen::MatrixXd::Zero(n, n), Eigen::MatrixXd::Zero(n, n)};
  for (std::size_t idx = 0; idx < ext.cells(); ++idx) {
    const Index3 c = lay.unflatten(idx);
    const int r0 = int(idx) * nv;
    g.D.block(r0, r0, nv, nv) = to_eigen(op.diagonal(idx));
    for (int d = 0; d < 3; ++d) {
      if (!ext.active(d)) continue;
      if (c[d] > 0) {
        const int c0 = int(lay.interior(shifted(c, d, -1))) * nv;
        g.L.block(r0, c0, nv, nv) = to_eigen(op.lower(idx, d));
      }
      if (c[d] + 1 < ext[d]) {
        const int c0 = int(lay.interior(shifted(c, d, 1))) * nv;
        g.U.block(r0, c0, nv, nv) = to_eigen(op.upper(idx, d));
      }
    }
  }
  return g;
}

/// Dense solve of (D + L) D^-1 (D + U) x = rhs.
inline Eigen::VectorXd dense_lusgs(const GlobalBlocks& g, const Eigen::VectorXd& rhs) {
  const Eigen::MatrixXd M = (g.D + g.L) * g.D.inverse() * (g.D + g.U);
  return M.partialPivLu().solve(rhs);
}

inline Eigen::VectorXd flatten(const CellVector& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.raw().data(), Eigen::Index(v.raw().size()));
}

inline double max_rel_diff(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return (a - b).cwiseAbs().maxCoeff() / std::max(b.cwiseAbs().maxCoeff(), 1e-300);
}

}  // namespace splitflow::testing
