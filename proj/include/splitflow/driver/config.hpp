#pragma once

// Case configuration: strict parsing of the case file, validation, the
// resolved-config echo, and construction of the solver inputs.

#include <array>
#include <charconv>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "splitflow/chemistry/mechanism_io.hpp"
#include "splitflow/driver/solver.hpp"
#include "splitflow/grid/plot3d.hpp"
#include "splitflow/io/toml_lite.hpp"
#include "splitflow/mixture/mixture_io.hpp"

namespace splitflow {

struct CaseConfig {
  std::string name = "case";
  std::string mixture;    // path, relative to the config file
  std::string mechanism;  // empty: inert
  int threads = 1;

  struct Grid {
    std::string type = "box";  // box | cylinder | plot3d
    std::array<int, 3> dims{8, 8, 1};
    std::array<double, 3> extent{1.0, 1.0, 1.0};
    double radius = 0.045;
    double outer_radius = 0.18;
    double stretch = 1.0;
    double first_cell = 0.0;
    double span = 0.01;
    std::string file;
  } grid;

  struct Freestream {
    double p = 101325.0;
    double T = 300.0;
    std::array<double, 3> u{0.0, 0.0, 0.0};
    std::vector<double> Y;  // empty: pure first species
  } freestream;

  std::string initial = "freestream";  // freestream | quiescent

  struct Boundary {
    std::array<std::string, 6> sides{"farfield", "farfield", "farfield", "farfield", "farfield", "farfield"};
    double wall_temperature = 300.0;
  } boundary;

  struct Solver {
    std::string scheme = "CI";
    double cfl = 5.0;
    std::vector<double> cfl_ramp;  // empty or (start, factor, every_n)
    double cfl_max = 1e12;
    int theta = 2;
    double dt = 0.0;  // 0: steady
    std::string species_offdiag = "symmetrized";
    std::string species_radius = "matched";
    std::string reconstruction = "muscl";
    bool viscous = true;
    int max_retries = 5;
  } solver;

  struct Stop {
    double orders = 6.0;
    int max_iters = 5000;
    double floor = 1e-12;
    std::string norm = "flow";  // flow | density | all
    double plateau_tol = 0.0;
    int plateau_window = 20;
    int monitor_every = 10;
    int steps = 1;
    double inner_orders = 8.0;
    int inner_max_iters = 200;
  } stop;

  struct Output {
    bool vtk = true;
  } output;

  std::string base_dir = ".";  // directory of the config file

  std::string resolve(const std::string& path) const {
    if (path.empty()) return path;
    const std::filesystem::path p(path);
    return p.is_absolute() ? path : (std::filesystem::path(base_dir) / p).lexically_normal().string();
  }
};

namespace detail {

/// Reads the keys of one table, remembering which were consumed.
class TableReader {
 public:
  explicit TableReader(const toml::Table* t) : t_(t), used_(t ? t->entries.size() : 0, false) {}

  const toml::Entry* take(const std::string& key) {
    if (!t_) return nullptr;
    for (std::size_t i = 0; i < t_->entries.size(); ++i)
      if (t_->entries[i].key == key) {
        used_[i] = true;
        return &t_->entries[i];
      }
    return nullptr;
  }

  void number(const std::string& key, double& out) {
    if (auto e = take(key)) out = expect(*e, toml::Value::Kind::number, "a number").number;
  }
  void integer(const std::string& key, int& out) {
    if (auto e = take(key)) {
      const auto& v = expect(*e, toml::Value::Kind::number, "an integer");
      if (!v.integral) throw ParseError("'" + key + "' must be an integer", v.line, v.column);
      out = int(v.number);
    }
  }
  void string(const std::string& key, std::string& out) {
    if (auto e = take(key)) out = expect(*e, toml::Value::Kind::string, "a string").text;
  }
  void boolean(const std::string& key, bool& out) {
    if (auto e = take(key)) out = expect(*e, toml::Value::Kind::boolean, "a boolean").flag;
  }
  void numbers(const std::string& key, std::vector<double>& out) {
    if (auto e = take(key)) {
      const auto& v = expect(*e, toml::Value::Kind::array, "an array of numbers");
      out.clear();
      for (const auto& item : v.items) {
        if (item.kind != toml::Value::Kind::number)
          throw ParseError("'" + key + "' must contain only numbers", item.line, item.column);
        out.push_back(item.number);
      }
    }
  }
  template <std::size_t N>
  void numbers(const std::string& key, std::array<double, N>& out) {
    std::vector<double> v;
    if (const auto* e = find(key)) {
      numbers(key, v);
      if (v.size() != N)
        throw ParseError("'" + key + "' must have " + std::to_string(N) + " entries", e->value.line, e->value.column);
      std::copy(v.begin(), v.end(), out.begin());
    }
  }
  template <std::size_t N>
  void integers(const std::string& key, std::array<int, N>& out) {
    std::array<double, N> v{};
    if (const auto* e = find(key)) {
      numbers(key, v);
      for (std::size_t i = 0; i < N; ++i) {
        if (v[i] != double(int(v[i])))
          throw ParseError("'" + key + "' must contain integers", e->value.line, e->value.column);
        out[i] = int(v[i]);
      }
    }
  }

  /// Throws ParseError naming the first key that was not consumed.
  void finish(const std::string& table) const {
    if (!t_) return;
    for (std::size_t i = 0; i < used_.size(); ++i)
      if (!used_[i]) {
        const auto& e = t_->entries[i];
        throw ParseError("unknown key '" + e.key + "'" + (table.empty() ? "" : " in [" + table + "]"), e.line, e.column);
      }
  }

 private:
  const toml::Entry* find(const std::string& key) const {
    return t_ ? t_->find(key) : nullptr;
  }
  static const toml::Value& expect(const toml::Entry& e, toml::Value::Kind kind, const char* what) {
    if (e.value.kind != kind) throw ParseError("'" + e.key + "' must be " + what, e.value.line, e.value.column);
    return e.value;
  }

  const toml::Table* t_;
  std::vector<bool> used_;
};

inline std::string fmt_number(double v) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, r.ptr);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

inline std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

template <class C>
std::string fmt_list(const C& values) {
  std::string out = "[";
  bool first = true;
  for (double v : values) {
    if (!first) out += ", ";
    out += fmt_number(v);
    first = false;
  }
  return out + "]";
}

}  // namespace detail

/// Parses case-file text. Unknown tables and keys, and values of the wrong
/// type, raise ParseError with the position of the offending entry.
inline CaseConfig parse_config_text(std::string_view text, const std::string& base_dir = ".") {
  const auto doc = toml::parse(text);
  CaseConfig cfg;
  cfg.base_dir = base_dir;
  static const char* tables[] = {"grid", "freestream", "boundary", "solver", "stop", "output"};
  for (std::size_t t = 1; t < doc.tables.size(); ++t) {
    bool known = false;
    for (const char* n : tables) known = known || doc.tables[t].name == n;
    if (!known)
      throw ParseError("unknown table [" + doc.tables[t].name + "]", doc.tables[t].line, doc.tables[t].column);
  }

  detail::TableReader root(&doc.root());
  root.string("name", cfg.name);
  root.string("mixture", cfg.mixture);
  root.string("mechanism", cfg.mechanism);
  root.integer("threads", cfg.threads);
  root.string("initial", cfg.initial);
  root.finish("");

  detail::TableReader g(doc.find("grid"));
  g.string("type", cfg.grid.type);
  g.integers("dims", cfg.grid.dims);
  g.numbers("extent", cfg.grid.extent);
  g.number("radius", cfg.grid.radius);
  g.number("outer_radius", cfg.grid.outer_radius);
  g.number("stretch", cfg.grid.stretch);
  g.number("first_cell", cfg.grid.first_cell);
  g.number("span", cfg.grid.span);
  g.string("file", cfg.grid.file);
  g.finish("grid");

  detail::TableReader f(doc.find("freestream"));
  f.number("p", cfg.freestream.p);
  f.number("T", cfg.freestream.T);
  f.numbers("u", cfg.freestream.u);
  f.numbers("Y", cfg.freestream.Y);
  f.finish("freestream");

  detail::TableReader b(doc.find("boundary"));
  for (int s = 0; s < 6; ++s) b.string(side_name(s), cfg.boundary.sides[std::size_t(s)]);
  b.number("wall_temperature", cfg.boundary.wall_temperature);
  b.finish("boundary");

  detail::TableReader s(doc.find("solver"));
  s.string("scheme", cfg.solver.scheme);
  s.number("cfl", cfg.solver.cfl);
  s.numbers("cfl_ramp", cfg.solver.cfl_ramp);
  s.number("cfl_max", cfg.solver.cfl_max);
  s.integer("theta", cfg.solver.theta);
  s.number("dt", cfg.solver.dt);
  s.string("species_offdiag", cfg.solver.species_offdiag);
  s.string("species_radius", cfg.solver.species_radius);
  s.string("reconstruction", cfg.solver.reconstruction);
  s.boolean("viscous", cfg.solver.viscous);
  s.integer("max_retries", cfg.solver.max_retries);
  s.finish("solver");

  detail::TableReader st(doc.find("stop"));
  st.number("orders", cfg.stop.orders);
  st.integer("max_iters", cfg.stop.max_iters);
  st.number("floor", cfg.stop.floor);
  st.string("norm", cfg.stop.norm);
  st.number("plateau_tol", cfg.stop.plateau_tol);
  st.integer("plateau_window", cfg.stop.plateau_window);
  st.integer("monitor_every", cfg.stop.monitor_every);
  st.integer("steps", cfg.stop.steps);
  st.number("inner_orders", cfg.stop.inner_orders);
  st.integer("inner_max_iters", cfg.stop.inner_max_iters);
  st.finish("stop");

  detail::TableReader o(doc.find("output"));
  o.boolean("vtk", cfg.output.vtk);
  o.finish("output");
  return cfg;
}

inline Scheme parse_scheme(const std::string& s) {
  if (s == "CI") return Scheme::CI;
  if (s == "CS1") return Scheme::CS1;
  if (s == "CS2") return Scheme::CS2;
  throw ValidationError({"scheme must be CI, CS1 or CS2 (got '" + s + "')"});
}

inline std::optional<BcKind> parse_bc_kind(const std::string& s) {
  if (s == "farfield") return BcKind::farfield;
  if (s == "outflow" || s == "supersonic_outflow") return BcKind::supersonic_outflow;
  if (s == "wall" || s == "noslip_isothermal") return BcKind::noslip_isothermal;
  if (s == "symmetry") return BcKind::symmetry;
  if (s == "periodic") return BcKind::periodic;
  return std::nullopt;
}

/// Checks values and referenced files; collects every violation into one ValidationError.
inline void validate_config(const CaseConfig& c) {
  std::vector<std::string> v;
  auto one_of = [&](const std::string& key, const std::string& val, std::initializer_list<const char*> allowed) {
    for (const char* a : allowed)
      if (val == a) return;
    std::string list;
    for (const char* a : allowed) list += (list.empty() ? "" : ", ") + std::string(a);
    v.push_back(key + " must be one of {" + list + "} (got '" + val + "')");
  };
  if (c.mixture.empty())
    v.push_back("mixture path is required");
  else if (!std::filesystem::exists(c.resolve(c.mixture)))
    v.push_back("mixture file '" + c.resolve(c.mixture) + "' does not exist");
  if (!c.mechanism.empty() && !std::filesystem::exists(c.resolve(c.mechanism)))
    v.push_back("mechanism file '" + c.resolve(c.mechanism) + "' does not exist");
  if (c.threads < 1) v.push_back("threads must be >= 1");
  one_of("initial", c.initial, {"freestream", "quiescent"});

  one_of("grid.type", c.grid.type, {"box", "cylinder", "plot3d"});
  if (c.grid.type != "plot3d")
    for (int d : c.grid.dims)
      if (d < 1) v.push_back("grid.dims entries must be >= 1");
  if (c.grid.type == "box")
    for (double e : c.grid.extent)
      if (!(e > 0.0)) v.push_back("grid.extent entries must be positive");
  if (c.grid.type == "cylinder") {
    if (!(c.grid.radius > 0.0 && c.grid.outer_radius > c.grid.radius))
      v.push_back("grid needs 0 < radius < outer_radius");
    if (!(c.grid.stretch > 0.0)) v.push_back("grid.stretch must be positive");
    if (!(c.grid.span > 0.0)) v.push_back("grid.span must be positive");
  }
  if (c.grid.type == "plot3d") {
    if (c.grid.file.empty())
      v.push_back("grid.file is required for plot3d grids");
    else if (!std::filesystem::exists(c.resolve(c.grid.file)))
      v.push_back("grid file '" + c.resolve(c.grid.file) + "' does not exist");
  }

  if (!(c.freestream.p > 0.0)) v.push_back("freestream.p must be positive");
  if (!(c.freestream.T > 0.0)) v.push_back("freestream.T must be positive");
  if (!c.freestream.Y.empty()) {
    double sum = 0.0;
    bool neg = false;
    for (double y : c.freestream.Y) {
      sum += y;
      neg = neg || y < 0.0;
    }
    if (neg) v.push_back("freestream.Y entries must be non-negative");
    if (std::abs(sum - 1.0) > 1e-10) v.push_back("freestream.Y must sum to 1");
  }

  for (int s = 0; s < 6; ++s)
    if (!parse_bc_kind(c.boundary.sides[std::size_t(s)]))
      v.push_back(std::string("boundary.") + side_name(s) + " has unknown kind '" + c.boundary.sides[std::size_t(s)] + "'");
  if (!(c.boundary.wall_temperature > 0.0)) v.push_back("boundary.wall_temperature must be positive");

  one_of("solver.scheme", c.solver.scheme, {"CI", "CS1", "CS2"});
  if (!(c.solver.cfl > 0.0)) v.push_back("solver.cfl must be positive");
  if (!c.solver.cfl_ramp.empty()) {
    if (c.solver.cfl_ramp.size() != 3)
      v.push_back("solver.cfl_ramp must be [start, factor, every_n]");
    else if (!(c.solver.cfl_ramp[0] > 0.0 && c.solver.cfl_ramp[1] > 0.0 && c.solver.cfl_ramp[2] >= 1.0))
      v.push_back("solver.cfl_ramp needs start > 0, factor > 0, every_n >= 1");
  }
  if (!(c.solver.cfl_max > 0.0)) v.push_back("solver.cfl_max must be positive");
  if (c.solver.theta != 0 && c.solver.theta != 2) v.push_back("solver.theta must be 0 or 2");
  if (!(c.solver.dt >= 0.0)) v.push_back("solver.dt must be >= 0 (0 selects steady mode)");
  one_of("solver.species_offdiag", c.solver.species_offdiag, {"symmetrized", "unhalved"});
  one_of("solver.species_radius", c.solver.species_radius, {"matched", "convective"});
  one_of("solver.reconstruction", c.solver.reconstruction, {"muscl", "first_order"});
  if (c.solver.max_retries < 0) v.push_back("solver.max_retries must be >= 0");

  if (!(c.stop.orders > 0.0)) v.push_back("stop.orders must be positive");
  if (c.stop.max_iters < 1) v.push_back("stop.max_iters must be >= 1");
  if (!(c.stop.floor >= 0.0)) v.push_back("stop.floor must be >= 0");
  one_of("stop.norm", c.stop.norm, {"flow", "density", "all"});
  if (!(c.stop.plateau_tol >= 0.0)) v.push_back("stop.plateau_tol must be >= 0");
  if (c.stop.plateau_window < 1) v.push_back("stop.plateau_window must be >= 1");
  if (c.stop.monitor_every < 1) v.push_back("stop.monitor_every must be >= 1");
  if (c.stop.steps < 1) v.push_back("stop.steps must be >= 1");
  if (!(c.stop.inner_orders > 0.0)) v.push_back("stop.inner_orders must be positive");
  if (c.stop.inner_max_iters < 1) v.push_back("stop.inner_max_iters must be >= 1");
  if (!v.empty()) throw ValidationError(v);
}

inline CaseConfig parse_config(const std::string& path) {
  const auto base = std::filesystem::path(path).parent_path().string();
  CaseConfig cfg = parse_config_text(toml::read_file(path), base.empty() ? "." : base);
  validate_config(cfg);
  return cfg;
}

/// Every key with its resolved value, in a fixed order and format.
inline std::string resolved_config_text(const CaseConfig& c) {
  using detail::fmt_list;
  using detail::fmt_number;
  using detail::quote;
  std::string o;
  auto kv = [&](const std::string& k, const std::string& v) { o += k + " = " + v + "\n"; };
  kv("name", quote(c.name));
  kv("mixture", quote(c.mixture));
  kv("mechanism", quote(c.mechanism));
  kv("threads", std::to_string(c.threads));
  kv("initial", quote(c.initial));
  o += "\n[grid]\n";
  kv("type", quote(c.grid.type));
  kv("dims", "[" + std::to_string(c.grid.dims[0]) + ", " + std::to_string(c.grid.dims[1]) + ", " +
                 std::to_string(c.grid.dims[2]) + "]");
  kv("extent", fmt_list(c.grid.extent));
  kv("radius", fmt_number(c.grid.radius));
  kv("outer_radius", fmt_number(c.grid.outer_radius));
  kv("stretch", fmt_number(c.grid.stretch));
  kv("first_cell", fmt_number(c.grid.first_cell));
  kv("span", fmt_number(c.grid.span));
  kv("file", quote(c.grid.file));
  o += "\n[freestream]\n";
  kv("p", fmt_number(c.freestream.p));
  kv("T", fmt_number(c.freestream.T));
  kv("u", fmt_list(c.freestream.u));
  kv("Y", fmt_list(c.freestream.Y));
  o += "\n[boundary]\n";
  for (int s = 0; s < 6; ++s) kv(side_name(s), quote(c.boundary.sides[std::size_t(s)]));
  kv("wall_temperature", fmt_number(c.boundary.wall_temperature));
  o += "\n[solver]\n";
  kv("scheme", quote(c.solver.scheme));
  kv("cfl", fmt_number(c.solver.cfl));
  kv("cfl_ramp", fmt_list(c.solver.cfl_ramp));
  kv("cfl_max", fmt_number(c.solver.cfl_max));
  kv("theta", std::to_string(c.solver.theta));
  kv("dt", fmt_number(c.solver.dt));
  kv("species_offdiag", quote(c.solver.species_offdiag));
  kv("species_radius", quote(c.solver.species_radius));
  kv("reconstruction", quote(c.solver.reconstruction));
  kv("viscous", c.solver.viscous ? "true" : "false");
  kv("max_retries", std::to_string(c.solver.max_retries));
  o += "\n[stop]\n";
  kv("orders", fmt_number(c.stop.orders));
  kv("max_iters", std::to_string(c.stop.max_iters));
  kv("floor", fmt_number(c.stop.floor));
  kv("norm", quote(c.stop.norm));
  kv("plateau_tol", fmt_number(c.stop.plateau_tol));
  kv("plateau_window", std::to_string(c.stop.plateau_window));
  kv("monitor_every", std::to_string(c.stop.monitor_every));
  kv("steps", std::to_string(c.stop.steps));
  kv("inner_orders", fmt_number(c.stop.inner_orders));
  kv("inner_max_iters", std::to_string(c.stop.inner_max_iters));
  o += "\n[output]\n";
  kv("vtk", c.output.vtk ? "true" : "false");
  return o;
}

/// Everything a solver needs, loaded and built from a validated config.
struct CaseSetup {
  MixtureModel model;
  Mechanism mechanism;
  StructuredGrid grid;
  BoundarySet bcs;
  CellPrimitive freestream;
  CellPrimitive initial;
  SolverSettings settings;
  StopCriteria stop;
  DualTimeSettings dual;
  bool unsteady = false;
};

inline CaseSetup build_case(const CaseConfig& c) {
  CaseSetup s;
  s.model = load_mixture(c.resolve(c.mixture));
  if (!c.mechanism.empty()) s.mechanism = load_mechanism(c.resolve(c.mechanism), s.model);
  validate_mechanism(s.mechanism, s.model);

  const int ns = s.model.ns();
  std::vector<double> Y = c.freestream.Y;
  if (Y.empty()) {
    Y.assign(std::size_t(ns), 0.0);
    Y[0] = 1.0;
  }
  if (int(Y.size()) != ns)
    throw ValidationError({"freestream.Y has " + std::to_string(Y.size()) + " entries but the mixture has " +
                           std::to_string(ns) + " species"});
  const Vec3 u{c.freestream.u[0], c.freestream.u[1], c.freestream.u[2]};
  s.freestream = make_primitive(c.freestream.p, c.freestream.T, u, Y, s.model);
  s.initial = c.initial == "quiescent" ? make_primitive(c.freestream.p, c.freestream.T, Vec3{}, Y, s.model)
                                       : s.freestream;

  if (c.grid.type == "box") {
    const Extents e{c.grid.dims[0], c.grid.dims[1], c.grid.dims[2]};
    s.grid = compute_metrics(e, generate_box({c.grid.extent[0], c.grid.extent[1], c.grid.extent[2]}, e));
  } else if (c.grid.type == "cylinder") {
    CylinderSpec cs;
    cs.radius = c.grid.radius;
    cs.outer_radius = c.grid.outer_radius;
    cs.dims = {c.grid.dims[0], c.grid.dims[1], c.grid.dims[2]};
    cs.stretch_ratio = c.grid.stretch;
    cs.first_cell = c.grid.first_cell;
    cs.span = c.grid.span;
    s.grid = compute_metrics(cs.dims, generate_cylinder_ogrid(cs));
  } else {
    const auto block = read_plot3d(c.resolve(c.grid.file));
    s.grid = compute_metrics(block.cells, block.nodes);
  }

  for (int side = 0; side < 6; ++side) {
    switch (*parse_bc_kind(c.boundary.sides[std::size_t(side)])) {
      case BcKind::farfield: s.bcs.sides[std::size_t(side)] = BoundaryCondition::make_farfield(s.freestream); break;
      case BcKind::supersonic_outflow: s.bcs.sides[std::size_t(side)] = BoundaryCondition::make_outflow(); break;
      case BcKind::noslip_isothermal:
        s.bcs.sides[std::size_t(side)] = BoundaryCondition::make_wall(c.boundary.wall_temperature);
        break;
      case BcKind::symmetry: s.bcs.sides[std::size_t(side)] = BoundaryCondition::make_symmetry(); break;
      case BcKind::periodic: s.bcs.sides[std::size_t(side)] = BoundaryCondition::make_periodic(); break;
    }
  }
  s.bcs.validate();

  s.settings.scheme = parse_scheme(c.solver.scheme);
  if (c.solver.cfl_ramp.size() == 3)
    s.settings.cfl = {c.solver.cfl_ramp[0], c.solver.cfl_ramp[1], int(c.solver.cfl_ramp[2]), c.solver.cfl_max};
  else
    s.settings.cfl = {c.solver.cfl, 1.0, 0, c.solver.cfl_max};
  s.settings.offdiag = c.solver.species_offdiag == "unhalved" ? SpeciesOffdiag::unhalved : SpeciesOffdiag::symmetrized;
  s.settings.species_radius =
      c.solver.species_radius == "convective" ? SpeciesRadius::convective : SpeciesRadius::matched;
  s.settings.residual.reconstruction =
      c.solver.reconstruction == "first_order" ? Reconstruction::first_order : Reconstruction::muscl;
  s.settings.residual.viscous = c.solver.viscous;
  s.settings.threads = c.threads;
  s.settings.max_retries = c.solver.max_retries;

  s.stop.orders = c.stop.orders;
  s.stop.max_iters = c.stop.max_iters;
  s.stop.floor = c.stop.floor;
  s.stop.norm = c.stop.norm == "density" ? StopNorm::density
                : c.stop.norm == "all"     ? StopNorm::all
                                           : StopNorm::flow;
  s.stop.plateau_tol = c.stop.plateau_tol;
  s.stop.plateau_window = c.stop.plateau_window;
  s.stop.monitor_every = c.stop.monitor_every;

  s.unsteady = c.solver.dt > 0.0;
  s.dual.dt = c.solver.dt;
  s.dual.theta = c.solver.theta;
  s.dual.steps = c.stop.steps;
  s.dual.inner_orders = c.stop.inner_orders;
  s.dual.inner_max_iters = c.stop.inner_max_iters;
  return s;
}

}  // namespace splitflow
