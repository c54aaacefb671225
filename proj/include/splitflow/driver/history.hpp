#pragma once

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

namespace splitflow {

struct HistoryRow {
  int iter = 0;
  double res_rho = 0.0;      // density row only
  double res_flow = 0.0;     // density, momentum and energy rows
  double res_species = 0.0;  // species rows
  double q_stag = std::nan("");
  double wall_seconds = 0.0;      // cumulative since the start of the solve
  double implicit_seconds = 0.0;  // cumulative time in LHS assembly, sweeps and update
  double cfl = 0.0;
  int retries = 0;
};

struct ConvergenceHistory {
  std::vector<HistoryRow> rows;
  int monitor_every = 10;
  int plateau_window = 20;

  static constexpr const char* csv_header = "iter,res_flow,res_species,q_stag,wall_seconds,implicit_seconds";

  std::string to_csv() const {
    std::string out = std::string(csv_header) + "\n";
    char buf[256];
    for (const auto& r : rows) {
      std::snprintf(buf, sizeof buf, "%d,%.10e,%.10e,%.10e,%.6f,%.6f\n", r.iter, r.res_flow, r.res_species, r.q_stag,
                    r.wall_seconds, r.implicit_seconds);
      out += buf;
    }
    return out;
  }

  /// First iteration at which `value(row)` has dropped `orders` decades below
  /// its largest earlier value; -1 if never.
  template <class F>
  int iterations_to_drop(double orders, F&& value) const {
    double peak = 0.0;
    for (const auto& r : rows) {
      const double v = value(r);
      peak = std::max(peak, v);
      if (peak > 0.0 && v <= peak * std::pow(10.0, -orders)) return r.iter;
    }
    return -1;
  }
};

}  // namespace splitflow
