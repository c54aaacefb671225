// Command-line front end: case runs, the species-scaling benchmark and
// paired scheme comparisons.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

#include "splitflow/bench/scaling.hpp"
#include "splitflow/driver/run.hpp"

using namespace splitflow;

namespace {

enum ExitCode { kOk = 0, kConfig = 2, kDiverged = 3, kIo = 4 };

/// 0 = errors only, 1 = progress (default), 2 = progress plus resolved settings.
int verbosity() {
  const char* v = std::getenv("SPLITFLOW_VERBOSITY");
  if (!v || !*v) return 1;
  const std::string s(v);
  if (s == "quiet" || s == "0") return 0;
  if (s == "debug" || s == "2") return 2;
  return 1;
}

void info(const std::string& msg) {
  if (verbosity() >= 1) std::cerr << msg << "\n";
}

void debug(const std::string& msg) {
  if (verbosity() >= 2) std::cerr << msg << "\n";
}

const char* kSchemas = R"(Output files and CSV schemas:
  run <config>        writes into --out (default runs/<case name>):
    history.csv           iter,res_flow,res_species,q_stag,wall_seconds,implicit_seconds
                            iter              pseudo-time iteration (1-based, cumulative over physical steps)
                            res_flow          scaled L2 norm of the density, momentum and energy rows
                            res_species       scaled L2 norm of the species rows
                            q_stag            stagnation-point wall heat flux in W/m^2 (nan without a wall)
                            wall_seconds      elapsed time since the start of the solve
                            implicit_seconds  cumulative time in LHS assembly, sweeps and update
    solution.vtk          final state (legacy VTK, structured grid), unless output.vtk = false
    resolved_config.toml  every key with the value actually used
    residuals.svg         res_flow and res_species against iteration, log y axis
  bench-scaling       writes --csv and --svg:
    bench_scaling.csv     ns,t_CI,t_CS,ratio
                            ns        number of species
                            t_CI      mean seconds per implicit step, coupled operator
                            t_CS      mean seconds per implicit step, split operator (CS1)
                            ratio     t_CS / t_CI
  compare <A> <B>     writes each run into --out/<case name> plus:
    compare.csv           case,scheme,iterations,iters_to_drop,converged,q_stag
                            iters_to_drop  first iteration at which the monitored norm fell
                                           --orders decades below its peak (-1 if never)
    compare.svg           both monitored residual histories on one log plot
                          (--norm flow: res_flow; density: density row only; all: every row)

Exit codes: 0 success, 2 configuration error, 3 solver diverged, 4 file I/O error.
Environment: SPLITFLOW_VERBOSITY = quiet | info | debug (default info); messages go to stderr.
)";

/// Runs `body` and maps library errors to the documented exit codes.
template <class F>
int guarded(F&& body) {
  try {
    return body();
  } catch (const ParseError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const ValidationError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const MissingBC& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const BadDims& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const MultiBlockUnsupported& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const DegenerateCell& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kIo;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kIo;
  } catch (const Error& e) {
    // Diverged, NonPhysicalState, SingularDiagonal, ZeroWavespeed, ...
    std::cerr << "solver diverged: " << e.what() << "\n";
    return kDiverged;
  }
}

struct Overrides {
  std::string scheme;
  double cfl = 0.0;
  int max_iters = 0;
  int threads = 0;
};

CaseConfig load_case(const std::string& path, const Overrides& o) {
  CaseConfig cfg = parse_config(path);
  if (!o.scheme.empty()) cfg.solver.scheme = o.scheme;
  if (o.cfl > 0.0) {
    cfg.solver.cfl = o.cfl;
    cfg.solver.cfl_ramp.clear();
  }
  if (o.max_iters > 0) cfg.stop.max_iters = o.max_iters;
  if (o.threads > 0) cfg.threads = o.threads;
  validate_config(cfg);
  debug("resolved configuration of " + path + ":\n" + resolved_config_text(cfg));
  return cfg;
}

void add_overrides(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--scheme", o.scheme, "Override solver.scheme (CI, CS1 or CS2)");
  cmd->add_option("--cfl", o.cfl, "Override solver.cfl and disable any CFL ramp")->check(CLI::PositiveNumber);
  cmd->add_option("--max-iters", o.max_iters, "Override stop.max_iters")->check(CLI::PositiveNumber);
  cmd->add_option("--threads", o.threads, "Override threads")->check(CLI::PositiveNumber);
}

RunResult run_logged(const CaseConfig& cfg, const std::string& dir) {
  auto res = run_case(cfg, dir, [](const std::string& s) { info(s); });
  if (!res.solve.converged) info("warning: '" + cfg.name + "' did not meet its stopping criterion");
  info("outputs in " + dir);
  return res;
}

int cmd_run(const std::string& config, std::string out, const Overrides& o) {
  const CaseConfig cfg = load_case(config, o);
  if (out.empty()) out = (std::filesystem::path("runs") / cfg.name).string();
  run_logged(cfg, out);
  return kOk;
}

int cmd_bench(const std::vector<int>& ns, int repeats, int warmup, const std::vector<int>& dims, bool allow_large,
              const std::string& csv, const std::string& svg) {
  BenchSettings s;
  s.ns_list = ns;
  s.repeats = repeats;
  s.warmup = warmup;
  s.dims = {dims[0], dims[1], dims[2]};
  for (int n : ns) {
    if (n <= 1024) continue;
    char buf[200];
    std::snprintf(buf, sizeof buf, "ns = %d needs roughly %.1f MiB for the case state", n,
                  bench_memory_estimate(n, s.dims) / (1024.0 * 1024.0));
    std::cerr << buf << "\n";
    if (!allow_large) {
      std::cerr << "config error: ns above 1024 requires --allow-large\n";
      return kConfig;
    }
  }
  info("timing the implicit step on a " + std::to_string(dims[0]) + "x" + std::to_string(dims[1]) + "x" +
       std::to_string(dims[2]) + " box, single-threaded");
  const auto report = bench_species_scaling(s, [](const BenchRow& r) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "ns %5d  t_CI %.4e s  t_CS %.4e s  ratio %.4f", r.ns, r.t_ci, r.t_cs, r.ratio);
    info(buf);
  });
  write_file_atomic(csv, report.to_csv());
  PlotSeries ci{"CI", {}, {}}, cs{"CS1", {}, {}};
  for (const auto& r : report.rows) {
    ci.x.push_back(r.ns);
    ci.y.push_back(r.t_ci);
    cs.x.push_back(r.ns);
    cs.y.push_back(r.t_cs);
  }
  PlotSpec spec;
  spec.title = "implicit step time against species count";
  spec.x_label = "ns";
  spec.y_label = "seconds per step";
  spec.log_x = true;
  write_plot_svg({ci, cs}, spec, svg);
  std::cout << report.to_csv();
  if (report.rows.size() >= 2) std::cout << report.summary();
  return kOk;
}

int cmd_compare(const std::string& a, const std::string& b, const std::string& out, double orders,
                const std::string& norm, const Overrides& o) {
  const CaseConfig ca = load_case(a, o), cb = load_case(b, o);
  std::string na = ca.name, nb = cb.name;
  if (na == nb) {
    na += "_a";
    nb += "_b";
  }
  const auto ra = run_logged(ca, (std::filesystem::path(out) / na).string());
  const auto rb = run_logged(cb, (std::filesystem::path(out) / nb).string());

  auto monitored = [&](const HistoryRow& r) {
    if (norm == "density") return r.res_rho;
    if (norm == "all") return std::hypot(r.res_flow, r.res_species);
    return r.res_flow;
  };
  std::string csv = "case,scheme,iterations,iters_to_drop,converged,q_stag\n";
  std::vector<PlotSeries> series;
  std::vector<int> drops;
  for (const auto* r : {&ra, &rb}) {
    const auto& h = r->solve.history;
    const int drop = h.iterations_to_drop(orders, monitored);
    drops.push_back(drop);
    const std::string& name = r == &ra ? na : nb;
    const std::string scheme = to_string(r->setup.settings.scheme);
    char buf[256];
    std::snprintf(buf, sizeof buf, "%s,%s,%zu,%d,%d,%.10e\n", name.c_str(), scheme.c_str(), h.rows.size(), drop,
                  int(r->solve.converged), h.rows.empty() ? std::nan("") : h.rows.back().q_stag);
    csv += buf;
    PlotSeries s{name + " (" + scheme + ")", {}, {}};
    for (const auto& row : h.rows) {
      s.x.push_back(row.iter);
      s.y.push_back(monitored(row));
    }
    series.push_back(std::move(s));
  }
  write_file_atomic((std::filesystem::path(out) / "compare.csv").string(), csv);
  PlotSpec spec;
  spec.title = na + " vs " + nb;
  spec.y_label = norm + " residual";
  try {
    write_plot_svg(series, spec, (std::filesystem::path(out) / "compare.svg").string());
  } catch (const EmptySeries&) {
    info("comparison plot skipped: no positive residuals");
  }

  std::cout << csv;
  char buf[256];
  if (drops[0] > 0 && drops[1] > 0) {
    std::snprintf(buf, sizeof buf, "iterations to a %.1f-order drop: %s %d, %s %d; reduction %.1f%%\n", orders,
                  na.c_str(), drops[0], nb.c_str(), drops[1], 100.0 * (drops[0] - drops[1]) / drops[0]);
  } else {
    std::snprintf(buf, sizeof buf, "iterations to a %.1f-order drop: %s %d, %s %d; reduction undefined\n", orders,
                  na.c_str(), drops[0], nb.c_str(), drops[1]);
  }
  std::cout << buf;
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Implicit solver for multi-species flows with coupled and component-split operators"};
  app.footer(kSchemas);
  app.require_subcommand(1);

  Overrides run_o;
  std::string run_config, run_out;
  auto* run = app.add_subcommand("run", "Run one case and write its outputs");
  run->add_option("config", run_config, "Case file (TOML)")->required();
  run->add_option("--out", run_out, "Output directory (default runs/<case name>)");
  add_overrides(run, run_o);

  std::vector<int> ns{16, 64, 256, 1024};
  std::vector<int> dims{10, 10, 10};
  int repeats = 10, warmup = 1;
  bool allow_large = false;
  std::string bench_csv = "bench_scaling.csv", bench_svg = "bench_scaling.svg";
  auto* bench = app.add_subcommand("bench-scaling", "Time the implicit step against the number of species");
  bench->add_option("--ns", ns, "Species counts, strictly increasing")->delimiter(',')->capture_default_str();
  bench->add_option("--repeats", repeats, "Timed steps per scheme and ns (>= 5)")->capture_default_str();
  bench->add_option("--warmup", warmup, "Untimed steps before timing")->capture_default_str();
  bench->add_option("--dims", dims, "Box cells per direction")->delimiter(',')->expected(3)->capture_default_str();
  bench->add_flag("--allow-large", allow_large, "Permit ns above 1024 (prints a memory estimate first)");
  bench->add_option("--csv", bench_csv, "CSV report path")->capture_default_str();
  bench->add_option("--svg", bench_svg, "Timing plot path")->capture_default_str();

  Overrides cmp_o;
  std::string cmp_a, cmp_b, cmp_out = "compare", cmp_norm = "flow";
  double cmp_orders = 4.0;
  auto* cmp = app.add_subcommand("compare", "Run two cases and plot their convergence together");
  cmp->add_option("configA", cmp_a, "First case file (the baseline)")->required();
  cmp->add_option("configB", cmp_b, "Second case file")->required();
  cmp->add_option("--out", cmp_out, "Output directory")->capture_default_str();
  cmp->add_option("--orders", cmp_orders, "Residual drop, in decades, used to count iterations")->capture_default_str();
  cmp->add_option("--norm", cmp_norm, "Monitored norm")->check(CLI::IsMember({"flow", "density", "all"}))->capture_default_str();
  add_overrides(cmp, cmp_o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfig;
  }

  if (*run) return guarded([&] { return cmd_run(run_config, run_out, run_o); });
  if (*bench) return guarded([&] { return cmd_bench(ns, repeats, warmup, dims, allow_large, bench_csv, bench_svg); });
  return guarded([&] { return cmd_compare(cmp_a, cmp_b, cmp_out, cmp_orders, cmp_norm, cmp_o); });
}
