#pragma once

// Post-sweep species updates that keep sum_s rho_s = rho when all species
// equations are integrated independently of the density equation.

#include <span>
#include <string>

#include "splitflow/core/error.hpp"
#include "splitflow/mixture/mixture.hpp"

namespace splitflow {

enum class Scheme { CI, CS1, CS2 };

inline const char* to_string(Scheme s) {
  switch (s) {
    case Scheme::CI: return "CI";
    case Scheme::CS1: return "CS1";
    case Scheme::CS2: return "CS2";
  }
  return "?";
}

namespace detail {
inline void check_partials(std::span<const double> out, double rho_new, double eps_neg) {
  for (double v : out)
    if (!(v >= -eps_neg * rho_new)) throw NonPhysicalState("negative partial density after species correction");
}
}  // namespace detail

/// rho_s' = rho_s + d_s + W_s (d_rho - sum d_r), W_s = rho_s / rho.
inline void correct_increment_cs1(std::span<const double> rho_s, double rho, std::span<const double> d_rho_s,
                                  double d_rho, std::span<double> out, double eps_neg = kNegativeFractionTolerance) {
  if (!(rho + d_rho > 0.0)) throw NonPhysicalState("non-positive density after update");
  // The defect is measured against the updated total so that round-off in
  // earlier steps cannot accumulate.
  double sum = 0.0;
  for (std::size_t s = 0; s < rho_s.size(); ++s) sum += rho_s[s] + d_rho_s[s];
  const double defect = (rho + d_rho) - sum;
  const double inv_rho = 1.0 / rho;
  for (std::size_t s = 0; s < rho_s.size(); ++s) out[s] = rho_s[s] + d_rho_s[s] + rho_s[s] * inv_rho * defect;
  detail::check_partials(out, rho + d_rho, eps_neg);
}

/// rho_s' = (rho + d_rho)(rho_s + d_s) / sum_r (rho_r + d_r).
inline void correct_normalize_cs2(std::span<const double> rho_s, double rho, std::span<const double> d_rho_s,
                                  double d_rho, std::span<double> out, double eps_neg = kNegativeFractionTolerance) {
  double sum = 0.0;
  for (std::size_t s = 0; s < rho_s.size(); ++s) sum += rho_s[s] + d_rho_s[s];
  if (!(sum > 0.0)) throw NonPhysicalState("non-positive species sum after update");
  if (!(rho + d_rho > 0.0)) throw NonPhysicalState("non-positive density after update");
  const double scale = (rho + d_rho) / sum;
  for (std::size_t s = 0; s < rho_s.size(); ++s) out[s] = (rho_s[s] + d_rho_s[s]) * scale;
  detail::check_partials(out, rho + d_rho, eps_neg);
}

/// Applies the increment dq to the conservative state q in place. CI
/// reconstructs the last partial density from the total; CS1 and CS2 use
/// their respective corrections. `work` must hold ns doubles.
inline void apply_increment(Scheme scheme, std::span<double> q, std::span<const double> dq, int ns,
                            std::span<double> work, double eps_neg = kNegativeFractionTolerance) {
  const auto rho_s = q.subspan(var::species, std::size_t(ns));
  const auto d_s = dq.subspan(var::species, std::size_t(ns));
  const double rho = q[var::rho], d_rho = dq[var::rho];
  switch (scheme) {
    case Scheme::CI: {
      if (!(rho + d_rho > 0.0)) throw NonPhysicalState("non-positive density after update");
      double partial = 0.0;
      for (int s = 0; s + 1 < ns; ++s) {
        work[std::size_t(s)] = rho_s[std::size_t(s)] + d_s[std::size_t(s)];
        partial += work[std::size_t(s)];
      }
      work[std::size_t(ns - 1)] = rho + d_rho - partial;
      detail::check_partials(work.first(std::size_t(ns)), rho + d_rho, eps_neg);
      break;
    }
    case Scheme::CS1: correct_increment_cs1(rho_s, rho, d_s, d_rho, work, eps_neg); break;
    case Scheme::CS2: correct_normalize_cs2(rho_s, rho, d_s, d_rho, work, eps_neg); break;
  }
  for (int v = 0; v < var::species; ++v) q[std::size_t(v)] += dq[std::size_t(v)];
  for (int s = 0; s < ns; ++s) rho_s[std::size_t(s)] = work[std::size_t(s)];
}

}  // namespace splitflow
