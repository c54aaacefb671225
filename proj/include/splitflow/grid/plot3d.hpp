#pragma once

// ASCII Plot3D (whole, 3-D, no iblank) grid files.

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "splitflow/core/error.hpp"
#include "splitflow/core/types.hpp"
#include "splitflow/io/toml_lite.hpp"

namespace splitflow {

struct Plot3dBlock {
  Extents cells;  // node counts minus one
  std::vector<Vec3> nodes;
};

namespace detail {

class NumberScanner {
 public:
  explicit NumberScanner(std::string_view s) : s_(s) {}

  std::size_t offset() const { return pos_; }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool at_end() {
    skip_ws();
    return pos_ >= s_.size();
  }
  /// Number of tokens on the current line from the current position.
  int tokens_on_line() const {
    std::size_t p = pos_;
    int count = 0;
    bool in_tok = false;
    while (p < s_.size() && s_[p] != '\n') {
      const bool space = std::isspace(static_cast<unsigned char>(s_[p]));
      if (!space && !in_tok) ++count;
      in_tok = !space;
      ++p;
    }
    return count;
  }
  double next(const char* what) {
    skip_ws();
    const std::size_t start = pos_;
    if (pos_ >= s_.size()) throw ParseError(std::string("unexpected end of file while reading ") + what, start);
    while (pos_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    const std::string tok(s_.substr(start, pos_ - start));
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end != tok.c_str() + tok.size()) throw ParseError("invalid number '" + tok + "'", start);
    return v;
  }
  int next_int(const char* what) {
    skip_ws();
    const std::size_t start = pos_;
    const double v = next(what);
    if (v != double(long(v)) || v < 1) throw ParseError(std::string("invalid ") + what, start);
    return int(v);
  }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline Plot3dBlock parse_plot3d(std::string_view text) {
  detail::NumberScanner in(text);
  in.skip_ws();
  int blocks = 1;
  if (in.tokens_on_line() == 1) blocks = in.next_int("block count");
  if (blocks != 1) throw MultiBlockUnsupported("multi-block Plot3D files are not supported (" + std::to_string(blocks) + " blocks)");
  const int ni = in.next_int("i dimension"), nj = in.next_int("j dimension"), nk = in.next_int("k dimension");
  if (ni < 2 || nj < 2 || nk < 2) throw ParseError("each node dimension must be at least 2", in.offset());
  Plot3dBlock b;
  b.cells = Extents{ni - 1, nj - 1, nk - 1};
  const std::size_t n = std::size_t(ni) * std::size_t(nj) * std::size_t(nk);
  b.nodes.resize(n);
  for (int d = 0; d < 3; ++d)
    for (std::size_t p = 0; p < n; ++p) b.nodes[p][d] = in.next("coordinates");
  if (!in.at_end()) throw ParseError("trailing data after grid coordinates", in.offset());
  return b;
}

inline Plot3dBlock read_plot3d(const std::string& path) { return parse_plot3d(toml::read_file(path)); }

inline std::string format_plot3d(Extents cells, const std::vector<Vec3>& nodes) {
  std::string out = "1\n" + std::to_string(cells.ni + 1) + " " + std::to_string(cells.nj + 1) + " " +
                    std::to_string(cells.nk + 1) + "\n";
  char buf[40];
  for (int d = 0; d < 3; ++d) {
    int col = 0;
    for (const auto& p : nodes) {
      std::snprintf(buf, sizeof buf, "%.17g", p[d]);
      out += buf;
      out += (++col % 4 == 0) ? '\n' : ' ';
    }
    if (col % 4 != 0) out += '\n';
  }
  return out;
}

inline void write_plot3d(const std::string& path, Extents cells, const std::vector<Vec3>& nodes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << format_plot3d(cells, nodes);
  if (!out) throw IoError("failed writing '" + path + "'");
}

}  // namespace splitflow
