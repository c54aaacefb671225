#pragma once

// Per-step cost of the implicit integration (LHS assembly plus LU-SGS
// sweeps) against the number of species, for the coupled and the
// component-split operators.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "splitflow/grid/boundary.hpp"
#include "splitflow/implicit/lusgs.hpp"
#include "splitflow/implicit/operator.hpp"

namespace splitflow {

struct BenchSettings {
  std::vector<int> ns_list{16, 64, 256, 1024};
  int repeats = 10;
  int warmup = 1;
  Extents dims{10, 10, 10};
  double cfl = 5.0;
  int bootstrap = 2000;
  std::uint64_t seed = 20240607;
};

struct BenchRow {
  int ns = 0;
  double t_ci = 0.0;  // mean seconds per implicit step
  double t_cs = 0.0;
  double ratio = 0.0;  // t_cs / t_ci
  std::vector<double> samples_ci, samples_cs;
};

struct SlopeFit {
  double slope = 0.0;
  double lo = 0.0;  // 95% bootstrap interval
  double hi = 0.0;
};

struct BenchReport {
  std::vector<BenchRow> rows;
  SlopeFit slope_ci, slope_cs;

  static constexpr const char* csv_header = "ns,t_CI,t_CS,ratio";

  std::string to_csv() const {
    std::string out = std::string(csv_header) + "\n";
    char buf[160];
    for (const auto& r : rows) {
      std::snprintf(buf, sizeof buf, "%d,%.6e,%.6e,%.6f\n", r.ns, r.t_ci, r.t_cs, r.ratio);
      out += buf;
    }
    return out;
  }

  std::string summary() const {
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "slope_CI = %.3f [%.3f, %.3f]\nslope_CS = %.3f [%.3f, %.3f]\n", slope_ci.slope, slope_ci.lo,
                  slope_ci.hi, slope_cs.slope, slope_cs.lo, slope_cs.hi);
    return buf;
  }
};

/// ns identical copies of an N2-like species (names S0, S1, ...).
inline MixtureModel cloned_mixture(int ns) {
  std::vector<SpeciesData> species;
  for (int s = 0; s < ns; ++s) {
    SpeciesData d;
    d.name = "S" + std::to_string(s);
    d.M = 0.0280134;
    d.cp = 3.5 * kUniversalGasConstant / d.M;
    d.mu_ref = 1.663e-5;
    d.T_mu = 273.0;
    d.S_mu = 107.0;
    species.push_back(d);
  }
  return MixtureModel(std::move(species));
}

/// Rough resident memory of one bench case, in bytes.
inline double bench_memory_estimate(int ns, const Extents& dims) {
  const double nv = 5.0 + ns;
  const double padded = double(dims.ni + 2 * kGhost) * double(dims.nj + 2 * kGhost) * double(dims.nk + 2 * kGhost);
  const double cells = double(dims.cells());
  // q and primitive mass fractions over the padded block, rhs and dq per
  // cell, the CS species diagonal, and the dense CI workspace.
  return 8.0 * (2.0 * padded * nv + 3.0 * cells * nv + nv * nv);
}

/// Least-squares slope of log(t) against log(ns).
inline double loglog_slope(const std::vector<double>& ns, const std::vector<double>& t) {
  const std::size_t n = ns.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += std::log(ns[i]);
    my += std::log(t[i]);
  }
  mx /= double(n);
  my /= double(n);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = std::log(ns[i]) - mx;
    sxy += dx * (std::log(t[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

/// Slope of the means plus a percentile bootstrap interval obtained by
/// resampling the per-ns timing samples.
inline SlopeFit bootstrap_slope(const std::vector<int>& ns, const std::vector<std::vector<double>>& samples, int draws,
                                std::uint64_t seed) {
  std::vector<double> x(ns.begin(), ns.end()), means(ns.size());
  for (std::size_t i = 0; i < ns.size(); ++i) {
    double m = 0.0;
    for (double v : samples[i]) m += v;
    means[i] = m / double(samples[i].size());
  }
  SlopeFit fit;
  fit.slope = loglog_slope(x, means);
  std::mt19937_64 rng(seed);
  std::vector<double> slopes;
  slopes.reserve(std::size_t(draws));
  std::vector<double> boot(ns.size());
  for (int b = 0; b < draws; ++b) {
    for (std::size_t i = 0; i < ns.size(); ++i) {
      std::uniform_int_distribution<std::size_t> pick(0, samples[i].size() - 1);
      double m = 0.0;
      for (std::size_t r = 0; r < samples[i].size(); ++r) m += samples[i][pick(rng)];
      boot[i] = m / double(samples[i].size());
    }
    slopes.push_back(loglog_slope(x, boot));
  }
  std::sort(slopes.begin(), slopes.end());
  if (!slopes.empty()) {
    fit.lo = slopes[std::size_t(0.025 * double(slopes.size() - 1))];
    fit.hi = slopes[std::size_t(0.975 * double(slopes.size() - 1))];
  } else {
    fit.lo = fit.hi = fit.slope;
  }
  return fit;
}

/// Times one implicit step (radii, pseudo-time steps, operator set-up and
/// the two sweeps) for each scheme on a uniform inert flow.
class ScalingCase {
 public:
  ScalingCase(int ns, const BenchSettings& settings)
      : model_(cloned_mixture(ns)),
        grid_(compute_metrics(settings.dims, generate_box({1.0, 1.0, 1.0}, settings.dims))),
        field_(settings.dims, model_),
        order_(settings.dims),
        cfl_(settings.cfl) {
    std::vector<double> Y(std::size_t(ns), 1.0 / ns);
    const auto state = make_primitive(101325.0, 300.0, {100.0, 50.0, 25.0}, Y, model_);
    field_.fill(state, model_);
    for (auto& b : bcs_.sides) b = BoundaryCondition::make_farfield(state);
    apply_boundary_conditions(field_, grid_, bcs_, model_);
    // A fixed, nonzero right-hand side keeps the sweeps doing real arithmetic.
    rhs_ = CellVector(settings.dims.cells(), model_.nv());
    std::mt19937_64 rng(settings.seed + std::uint64_t(ns));
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (double& v : rhs_.raw()) v = u(rng);
  }

  double time_step(Scheme scheme) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto radii = compute_spectral_radii(field_, grid_, model_, true, 1);
    const auto dtau = local_time_steps(radii, src_, cfl_);
    if (scheme == Scheme::CI) {
      CoupledOperator op(field_, grid_, model_, radii, dtau, src_);
      lusgs_solve(op, order_, rhs_, dq_, 1);
    } else {
      SplitOperator op(field_, grid_, model_, radii, dtau, src_);
      lusgs_solve(op, order_, rhs_, dq_, 1);
    }
    const double t = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    sink_ += dq_.raw()[0];
    return t;
  }

  double sink() const { return sink_; }

 private:
  MixtureModel model_;
  StructuredGrid grid_;
  FlowField field_;
  BoundarySet bcs_;
  SweepOrder order_;
  SourceLinearization src_;
  CellVector rhs_, dq_;
  double cfl_;
  double sink_ = 0.0;
};

/// Runs the scaling benchmark. `progress` receives one line per finished ns.
inline BenchReport bench_species_scaling(const BenchSettings& s,
                                         const std::function<void(const BenchRow&)>& progress = {}) {
  std::vector<std::string> errors;
  if (s.ns_list.empty()) errors.push_back("ns list is empty");
  for (std::size_t i = 0; i < s.ns_list.size(); ++i) {
    if (s.ns_list[i] < 1) errors.push_back("ns values must be >= 1");
    if (i > 0 && s.ns_list[i] <= s.ns_list[i - 1]) errors.push_back("ns values must be strictly increasing");
  }
  if (s.repeats < 5) errors.push_back("repeats must be >= 5");
  if (s.warmup < 0) errors.push_back("warmup must be >= 0");
  if (!errors.empty()) throw ValidationError(errors);

  BenchReport report;
  std::vector<std::vector<double>> all_ci, all_cs;
  for (int ns : s.ns_list) {
    ScalingCase bench(ns, s);
    BenchRow row;
    row.ns = ns;
    for (int w = 0; w < s.warmup; ++w) {
      bench.time_step(Scheme::CI);
      bench.time_step(Scheme::CS1);
    }
    // Interleave the schemes so slow drifts in machine load affect both alike.
    for (int r = 0; r < s.repeats; ++r) {
      row.samples_ci.push_back(bench.time_step(Scheme::CI));
      row.samples_cs.push_back(bench.time_step(Scheme::CS1));
    }
    auto mean = [](const std::vector<double>& v) {
      double m = 0.0;
      for (double x : v) m += x;
      return m / double(v.size());
    };
    row.t_ci = mean(row.samples_ci);
    row.t_cs = mean(row.samples_cs);
    row.ratio = row.t_cs / row.t_ci;
    all_ci.push_back(row.samples_ci);
    all_cs.push_back(row.samples_cs);
    report.rows.push_back(row);
    if (progress) progress(row);
  }
  if (s.ns_list.size() >= 2) {
    report.slope_ci = bootstrap_slope(s.ns_list, all_ci, s.bootstrap, s.seed);
    report.slope_cs = bootstrap_slope(s.ns_list, all_cs, s.bootstrap, s.seed + 1);
  }
  return report;
}

}  // namespace splitflow
