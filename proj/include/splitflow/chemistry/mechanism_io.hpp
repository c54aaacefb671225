#pragma once

// Reaction list, one reaction per line:
//
//   2 O + N2 -> 2 N + O2      A=1.0e3 b=-1.5 Ea=2.0e5
//   A <-> B                   A=2.0 b=0 Ea=0 Ab=1.0 bb=0 Eab=0
//
// '#' starts a comment. Coefficients default to 1 and may be written
// either detached ("2 O") or attached ("2O").

#include <cctype>
#include <cstdlib>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "splitflow/chemistry/mechanism.hpp"
#include "splitflow/io/toml_lite.hpp"

namespace splitflow {

namespace detail {

struct Token {
  std::string text;
  int column = 0;
};

inline std::vector<Token> tokenize_line(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    if (line[i] == '#') break;
    if (std::isspace(static_cast<unsigned char>(line[i]))) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])) && line[i] != '#') ++i;
    out.push_back(Token{std::string(line.substr(start, i - start)), int(start) + 1});
  }
  return out;
}

inline bool parse_number(const std::string& s, double& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size();
}

}  // namespace detail

inline Mechanism parse_mechanism(std::string_view text, const MixtureModel& model) {
  Mechanism mech;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = std::min(text.find('\n', pos), text.size());
    const std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    const auto toks = detail::tokenize_line(line);
    if (toks.empty()) {
      if (eol == text.size()) break;
      continue;
    }

    Reaction rx;
    rx.reactant_stoich.assign(std::size_t(model.ns()), 0);
    rx.product_stoich.assign(std::size_t(model.ns()), 0);
    std::vector<int>* side = &rx.reactant_stoich;
    bool saw_arrow = false, reversible = false, expect_term = true, in_params = false;
    int pending_coeff = 0, pending_col = 0;
    std::map<std::string, double> params;
    std::map<std::string, int> param_cols;

    auto add_species = [&](const std::string& name, int coeff, int col) {
      const int s = model.index_of(name);
      if (s < 0) throw ParseError("unknown species '" + name + "'", line_no, col);
      (*side)[std::size_t(s)] += coeff;
    };

    for (const auto& tok : toks) {
      const auto eq = tok.text.find('=');
      if (eq != std::string::npos) {
        if (!saw_arrow || expect_term) throw ParseError("rate parameter before a complete reaction", line_no, tok.column);
        in_params = true;
        const std::string key = tok.text.substr(0, eq);
        double v = 0.0;
        if (!detail::parse_number(tok.text.substr(eq + 1), v))
          throw ParseError("invalid number for '" + key + "'", line_no, tok.column + int(eq) + 1);
        static const std::vector<std::string> known{"A", "b", "Ea", "Ab", "bb", "Eab"};
        if (std::find(known.begin(), known.end(), key) == known.end())
          throw ParseError("unknown rate parameter '" + key + "'", line_no, tok.column);
        if (params.count(key)) throw ParseError("duplicate rate parameter '" + key + "'", line_no, tok.column);
        params[key] = v;
        param_cols[key] = tok.column;
        continue;
      }
      if (in_params) throw ParseError("unexpected token '" + tok.text + "'", line_no, tok.column);
      if (tok.text == "->" || tok.text == "<->") {
        if (saw_arrow) throw ParseError("second reaction arrow", line_no, tok.column);
        if (expect_term) throw ParseError("missing species before arrow", line_no, tok.column);
        saw_arrow = true;
        reversible = tok.text == "<->";
        side = &rx.product_stoich;
        expect_term = true;
        continue;
      }
      if (tok.text == "+") {
        if (expect_term) throw ParseError("unexpected '+'", line_no, tok.column);
        expect_term = true;
        continue;
      }
      if (!expect_term) throw ParseError("expected '+' or arrow before '" + tok.text + "'", line_no, tok.column);
      std::size_t d = 0;
      while (d < tok.text.size() && std::isdigit(static_cast<unsigned char>(tok.text[d]))) ++d;
      if (d == tok.text.size()) {
        if (pending_coeff) throw ParseError("two coefficients in a row", line_no, tok.column);
        pending_coeff = std::atoi(tok.text.c_str());
        pending_col = tok.column;
        if (pending_coeff <= 0) throw ParseError("stoichiometric coefficient must be positive", line_no, tok.column);
        continue;
      }
      int coeff = 1;
      if (d > 0) {
        if (pending_coeff) throw ParseError("two coefficients in a row", line_no, tok.column);
        coeff = std::atoi(tok.text.substr(0, d).c_str());
        if (coeff <= 0) throw ParseError("stoichiometric coefficient must be positive", line_no, tok.column);
      } else if (pending_coeff) {
        coeff = pending_coeff;
      }
      add_species(tok.text.substr(d), coeff, tok.column + int(d));
      pending_coeff = 0;
      expect_term = false;
    }
    if (pending_coeff) throw ParseError("coefficient without species", line_no, pending_col);
    if (!saw_arrow) throw ParseError("missing '->' or '<->'", line_no, toks.front().column);
    if (expect_term) throw ParseError("missing products", line_no, toks.back().column);
    for (const char* key : {"A", "b", "Ea"})
      if (!params.count(key)) throw ParseError(std::string("missing rate parameter '") + key + "'", line_no, int(line.size()) + 1);
    rx.forward = Arrhenius{params["A"], params["b"], params["Ea"]};
    if (reversible) {
      for (const char* key : {"Ab", "bb", "Eab"})
        if (!params.count(key))
          throw ParseError(std::string("reversible reaction lacks '") + key + "'", line_no, int(line.size()) + 1);
      rx.backward = Arrhenius{params["Ab"], params["bb"], params["Eab"]};
    } else {
      for (const char* key : {"Ab", "bb", "Eab"})
        if (params.count(key))
          throw ParseError(std::string("backward parameter '") + key + "' on an irreversible reaction", line_no,
                           param_cols[key]);
    }
    mech.reactions.push_back(std::move(rx));
    if (eol == text.size()) break;
  }
  validate_mechanism(mech, model);
  return mech;
}

inline Mechanism load_mechanism(const std::string& path, const MixtureModel& model) {
  return parse_mechanism(toml::read_file(path), model);
}

}  // namespace splitflow
