#pragma once

#include <string>
#include <string_view>

#include "splitflow/io/toml_lite.hpp"
#include "splitflow/mixture/mixture.hpp"

namespace splitflow {

/// Mixture file: top-level `Pr`, `Sc`, then one [table] per species, in
/// order, with keys M, cp, hf, Tref, mu_ref, T_mu, S_mu.
inline MixtureModel parse_mixture(std::string_view text) {
  const auto doc = toml::parse(text);
  double Pr = 0.72, Sc = 0.7;
  for (const auto& e : doc.root().entries) {
    if (e.value.kind != toml::Value::Kind::number)
      throw ParseError("'" + e.key + "' must be a number", e.line, e.column);
    if (e.key == "Pr")
      Pr = e.value.number;
    else if (e.key == "Sc")
      Sc = e.value.number;
    else
      throw ParseError("unknown mixture key '" + e.key + "'", e.line, e.column);
  }
  std::vector<SpeciesData> species;
  for (std::size_t t = 1; t < doc.tables.size(); ++t) {
    const auto& table = doc.tables[t];
    SpeciesData s;
    s.name = table.name;
    bool have_M = false, have_cp = false;
    for (const auto& e : table.entries) {
      if (e.value.kind != toml::Value::Kind::number)
        throw ParseError("'" + e.key + "' must be a number", e.line, e.column);
      const double v = e.value.number;
      if (e.key == "M") {
        s.M = v;
        have_M = true;
      } else if (e.key == "cp") {
        s.cp = v;
        have_cp = true;
      } else if (e.key == "hf") {
        s.hf = v;
      } else if (e.key == "Tref") {
        s.T_ref = v;
      } else if (e.key == "mu_ref") {
        s.mu_ref = v;
      } else if (e.key == "T_mu") {
        s.T_mu = v;
      } else if (e.key == "S_mu") {
        s.S_mu = v;
      } else {
        throw ParseError("unknown species key '" + e.key + "'", e.line, e.column);
      }
    }
    if (!have_M) throw ParseError("species '" + s.name + "' lacks M", table.line, table.column);
    if (!have_cp) throw ParseError("species '" + s.name + "' lacks cp", table.line, table.column);
    species.push_back(std::move(s));
  }
  return MixtureModel(std::move(species), Pr, Sc);
}

inline MixtureModel load_mixture(const std::string& path) { return parse_mixture(toml::read_file(path)); }

}  // namespace splitflow
