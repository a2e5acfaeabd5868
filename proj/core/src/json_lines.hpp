#pragma once

// Internal helpers for the JSON-lines files written by the tool.

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "posetta/error.hpp"

namespace posetta::detail {

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoFailure, "cannot open '" + path.string() + "'");
  std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(Errc::IoFailure, "read failed for '" + path.string() + "'");
  return data;
}

inline void write_text(const std::filesystem::path& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::IoFailure, "cannot open '" + path.string() + "' for writing");
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  out.flush();
  if (!out) throw Error(Errc::IoFailure, "write failed for '" + path.string() + "'");
}

/// Parses every non-blank line; schema errors carry the line number.
inline std::vector<nlohmann::ordered_json> parse_lines(const std::string& text,
                                                       const std::string& what) {
  std::vector<nlohmann::ordered_json> out;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    std::string line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(nlohmann::ordered_json::parse(line));
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(Errc::SchemaViolation,
                  what + " line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace posetta::detail
