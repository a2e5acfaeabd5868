#pragma once

#include <string>
#include <utility>
#include <vector>

namespace posetta {

/// First line of every file the tool writes: which command produced it,
/// the resolved configuration and digests of its inputs. Entries keep
/// insertion order so output is byte-stable.
struct RunHeader {
  std::string kind;
  std::vector<std::pair<std::string, std::string>> config;
  std::vector<std::pair<std::string, std::string>> inputs;

  void set_config(std::string key, std::string value);
  void set_input(std::string key, std::string value);

  friend bool operator==(const RunHeader&, const RunHeader&) = default;
};

}  // namespace posetta
