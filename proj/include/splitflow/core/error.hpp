#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace splitflow {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Thermodynamically inadmissible state (rho <= 0, T <= 0, strongly negative
/// partial density, ...). Carries the flat interior cell index when known.
class NonPhysicalState : public Error {
 public:
  explicit NonPhysicalState(const std::string& what, long cell = -1)
      : Error(cell >= 0 ? what + " (cell " + std::to_string(cell) + ")" : what), cell_(cell) {}
  long cell() const noexcept { return cell_; }

 private:
  long cell_;
};

class DegenerateCell : public Error {
 public:
  using Error::Error;
};

class BadDims : public Error {
 public:
  using Error::Error;
};

class MissingBC : public Error {
 public:
  using Error::Error;
};

class SingularDiagonal : public Error {
 public:
  using Error::Error;
};

class ZeroWavespeed : public Error {
 public:
  using Error::Error;
};

class Diverged : public Error {
 public:
  using Error::Error;
};

class EmptySeries : public Error {
 public:
  using Error::Error;
};

class NoWallBoundary : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class MultiBlockUnsupported : public Error {
 public:
  using Error::Error;
};

/// Syntax error in one of the text inputs. Either (line, column) or a byte
/// offset is meaningful depending on the format.
class ParseError : public Error {
 public:
  ParseError(const std::string& msg, int line, int column)
      : Error(msg + " at line " + std::to_string(line) + ", column " + std::to_string(column)),
        line_(line),
        column_(column) {}
  ParseError(const std::string& msg, std::size_t byte_offset)
      : Error(msg + " at byte " + std::to_string(byte_offset)), byte_offset_(byte_offset) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }
  std::size_t byte_offset() const noexcept { return byte_offset_; }

 private:
  int line_ = 0;
  int column_ = 0;
  std::size_t byte_offset_ = 0;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<std::string> violations)
      : Error(join(violations)), violations_(std::move(violations)) {}
  const std::vector<std::string>& violations() const noexcept { return violations_; }

 private:
  static std::string join(const std::vector<std::string>& v) {
    std::string out = "invalid configuration:";
    for (const auto& s : v) out += "\n  - " + s;
    return out;
  }
  std::vector<std::string> violations_;
};

}  // namespace splitflow
