#pragma once

// A small reader for the TOML subset used by mixture and case files:
// [table] headers, key = value pairs, '#' comments, numbers, "strings",
// booleans, and (possibly multi-line) arrays of scalars.

#include <cctype>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "splitflow/core/error.hpp"

namespace splitflow::toml {

struct Value {
  enum class Kind { number, string, boolean, array };
  Kind kind = Kind::number;
  double number = 0.0;
  bool integral = false;
  std::string text;
  bool flag = false;
  std::vector<Value> items;
  int line = 0;
  int column = 0;
};

struct Entry {
  std::string key;
  Value value;
  int line = 0;
  int column = 0;
};

struct Table {
  std::string name;  // empty for the root table
  int line = 0;
  int column = 0;
  std::vector<Entry> entries;

  const Entry* find(std::string_view key) const {
    for (const auto& e : entries)
      if (e.key == key) return &e;
    return nullptr;
  }
};

struct Document {
  std::vector<Table> tables;  // tables[0] is the root

  const Table* find(std::string_view name) const {
    for (const auto& t : tables)
      if (t.name == name) return &t;
    return nullptr;
  }
  const Table& root() const { return tables.front(); }
};

namespace detail {

class Reader {
 public:
  explicit Reader(std::string_view s) : s_(s) {}

  Document parse() {
    Document doc;
    doc.tables.push_back(Table{"", 1, 1, {}});
    while (true) {
      skip_blank_lines();
      if (eof()) break;
      if (peek() == '[') {
        const int l = line_, c = col_;
        get();
        skip_ws();
        std::string name;
        if (peek() == '"') {
          name = read_string();
        } else {
          while (!eof() && is_table_char(peek())) name += get();
        }
        skip_ws();
        if (name.empty()) fail("expected table name");
        if (get() != ']') fail_at("expected ']' after table name", l, c);
        for (const auto& t : doc.tables)
          if (t.name == name) fail_at("duplicate table [" + name + "]", l, c);
        doc.tables.push_back(Table{name, l, c, {}});
        end_of_line();
        continue;
      }
      const int l = line_, c = col_;
      std::string key;
      while (!eof() && is_key_char(peek())) key += get();
      if (key.empty()) fail("expected key");
      skip_ws();
      if (eof() || get() != '=') fail("expected '=' after key '" + key + "'");
      skip_ws();
      Value v = read_value();
      Table& t = doc.tables.back();
      if (t.find(key)) fail_at("duplicate key '" + key + "'", l, c);
      t.entries.push_back(Entry{key, std::move(v), l, c});
      end_of_line();
    }
    return doc;
  }

 private:
  static bool is_key_char(char ch) {
    return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '-';
  }
  static bool is_table_char(char ch) { return is_key_char(ch) || ch == '.' || ch == '+'; }

  bool eof() const { return pos_ >= s_.size(); }
  char peek() const { return eof() ? '\0' : s_[pos_]; }
  char get() {
    const char ch = s_[pos_++];
    if (ch == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return ch;
  }

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, line_, col_); }
  [[noreturn]] static void fail_at(const std::string& msg, int l, int c) { throw ParseError(msg, l, c); }

  void skip_ws() {
    while (!eof() && (peek() == ' ' || peek() == '\t' || peek() == '\r')) get();
  }
  void skip_comment() {
    if (peek() == '#')
      while (!eof() && peek() != '\n') get();
  }
  void skip_blank_lines() {
    while (!eof()) {
      skip_ws();
      skip_comment();
      if (peek() == '\n')
        get();
      else
        break;
    }
  }
  void skip_ws_newlines() {
    while (!eof()) {
      skip_ws();
      skip_comment();
      if (peek() == '\n')
        get();
      else
        break;
    }
  }
  void end_of_line() {
    skip_ws();
    skip_comment();
    if (eof()) return;
    if (peek() != '\n') fail("unexpected trailing characters");
    get();
  }

  std::string read_string() {
    const int l = line_, c = col_;
    get();  // opening quote
    std::string out;
    while (true) {
      if (eof() || peek() == '\n') fail_at("unterminated string", l, c);
      char ch = get();
      if (ch == '"') break;
      if (ch == '\\') {
        if (eof()) fail_at("unterminated string", l, c);
        const char e = get();
        switch (e) {
          case 'n': out += '\n'; break;
          case 't': out += '\t'; break;
          case '"': out += '"'; break;
          case '\\': out += '\\'; break;
          default: fail("unsupported escape sequence");
        }
        continue;
      }
      out += ch;
    }
    return out;
  }

  Value read_value() {
    Value v;
    v.line = line_;
    v.column = col_;
    const char ch = peek();
    if (ch == '"') {
      v.kind = Value::Kind::string;
      v.text = read_string();
      return v;
    }
    if (ch == '[') {
      get();
      v.kind = Value::Kind::array;
      skip_ws_newlines();
      if (peek() == ']') {
        get();
        return v;
      }
      while (true) {
        skip_ws_newlines();
        Value item = read_value();
        if (item.kind == Value::Kind::array) fail_at("nested arrays are not supported", item.line, item.column);
        v.items.push_back(std::move(item));
        skip_ws_newlines();
        if (eof()) fail_at("unterminated array", v.line, v.column);
        const char sep = get();
        if (sep == ']') break;
        if (sep != ',') fail("expected ',' or ']' in array");
        skip_ws_newlines();
        if (peek() == ']') {
          get();
          break;
        }
      }
      return v;
    }
    std::string tok;
    while (!eof() && !std::isspace(static_cast<unsigned char>(peek())) && peek() != ',' && peek() != ']' &&
           peek() != '#')
      tok += get();
    if (tok == "true" || tok == "false") {
      v.kind = Value::Kind::boolean;
      v.flag = tok == "true";
      return v;
    }
    if (tok.empty()) fail_at("expected value", v.line, v.column);
    std::string clean;
    for (char c : tok)
      if (c != '_') clean += c;
    char* end = nullptr;
    const double d = std::strtod(clean.c_str(), &end);
    if (end != clean.c_str() + clean.size()) fail_at("invalid value '" + tok + "'", v.line, v.column);
    v.kind = Value::Kind::number;
    v.number = d;
    v.integral = clean.find_first_of(".eEnN") == std::string::npos;
    return v;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

}  // namespace detail

inline Document parse(std::string_view text) { return detail::Reader(text).parse(); }

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Document parse_file(const std::string& path) { return parse(read_file(path)); }

}  // namespace splitflow::toml
