#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>

#include "splitflow/core/error.hpp"

namespace splitflow {

/// Writes `content` to a temporary sibling and renames it over `path`, so
/// readers see either the previous file or the complete new one.
inline void write_file_atomic(const std::string& path, std::string_view content) {
  const std::filesystem::path target(path);
  std::filesystem::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + tmp.string() + "' for writing");
    out.write(content.data(), std::streamsize(content.size()));
    out.flush();
    if (!out) throw IoError("write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, target, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot replace '" + path + "'");
  }
}

}  // namespace splitflow
