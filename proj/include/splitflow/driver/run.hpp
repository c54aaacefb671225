#pragma once

// Case execution: builds the solver from a config, runs it, and writes the
// history CSV, the final VTK snapshot, the resolved config and a residual plot.

#include <filesystem>
#include <functional>
#include <string>

#include "splitflow/driver/config.hpp"
#include "splitflow/io/svg.hpp"
#include "splitflow/io/vtk.hpp"

namespace splitflow {

struct RunOutput {
  std::string history_csv = "history.csv";
  std::string solution_vtk = "solution.vtk";
  std::string resolved_config = "resolved_config.toml";
  std::string residual_svg = "residuals.svg";
};

struct RunResult {
  SolveResult solve;
  CaseSetup setup;
  std::string out_dir;
};

inline std::vector<PlotSeries> residual_series(const ConvergenceHistory& h, const std::string& prefix = "") {
  PlotSeries flow{prefix + "res_flow", {}, {}}, species{prefix + "res_species", {}, {}};
  for (const auto& r : h.rows) {
    flow.x.push_back(r.iter);
    flow.y.push_back(r.res_flow);
    species.x.push_back(r.iter);
    species.y.push_back(r.res_species);
  }
  return {flow, species};
}

/// Runs one case and writes its outputs into out_dir. Solver errors
/// propagate after the resolved config (and, for the solve itself, nothing
/// else) has been written.
inline RunResult run_case(const CaseConfig& cfg, const std::string& out_dir,
                          const std::function<void(const std::string&)>& log = {}) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec || !std::filesystem::is_directory(out_dir)) throw IoError("cannot create output directory '" + out_dir + "'");
  const RunOutput names;
  const auto path = [&](const std::string& f) { return (std::filesystem::path(out_dir) / f).string(); };

  RunResult res;
  res.out_dir = out_dir;
  res.setup = build_case(cfg);
  write_file_atomic(path(names.resolved_config), resolved_config_text(cfg));
  CaseSetup& s = res.setup;
  if (log)
    log("case '" + cfg.name + "': " + std::to_string(s.model.ns()) + " species, " +
        std::to_string(s.grid.extents().cells()) + " cells, scheme " + to_string(s.settings.scheme));

  Solver solver(s.model, s.mechanism, s.grid, s.bcs, s.settings, s.freestream);
  solver.initialize(s.initial);
  res.solve = s.unsteady ? solver.unsteady_solve(s.dual) : solver.steady_solve(s.stop);
  if (log) {
    const auto& rows = res.solve.history.rows;
    char buf[200];
    std::snprintf(buf, sizeof buf, "stopped after %zu iterations (%s); res_flow %.3e, res_species %.3e",
                  rows.size(), res.solve.reason.c_str(), rows.empty() ? 0.0 : rows.back().res_flow,
                  rows.empty() ? 0.0 : rows.back().res_species);
    log(buf);
  }

  write_file_atomic(path(names.history_csv), res.solve.history.to_csv());
  if (cfg.output.vtk) write_vtk(path(names.solution_vtk), solver.field(), s.grid, s.model);
  PlotSpec spec;
  spec.title = cfg.name + " (" + to_string(s.settings.scheme) + ") residual history";
  try {
    write_plot_svg(residual_series(res.solve.history), spec, path(names.residual_svg));
  } catch (const EmptySeries&) {
    // An exactly zero history has nothing to show on a logarithmic axis.
    if (log) log("residual plot skipped: no positive residuals");
  }
  return res;
}

}  // namespace splitflow
