#include "posetta/run_header.hpp"

#include "run_header_json.hpp"

namespace posetta {

namespace {

void upsert(std::vector<std::pair<std::string, std::string>>& entries, std::string key,
            std::string value) {
  for (auto& [k, v] : entries) {
    if (k == key) {
      v = std::move(value);
      return;
    }
  }
  entries.emplace_back(std::move(key), std::move(value));
}

}  // namespace

void RunHeader::set_config(std::string key, std::string value) {
  upsert(config, std::move(key), std::move(value));
}

void RunHeader::set_input(std::string key, std::string value) {
  upsert(inputs, std::move(key), std::move(value));
}

nlohmann::ordered_json header_to_json(const RunHeader& h) {
  nlohmann::ordered_json j;
  j["kind"] = h.kind;
  j["config"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : h.config) j["config"][k] = v;
  j["inputs"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : h.inputs) j["inputs"][k] = v;
  return j;
}

RunHeader header_from_json(const nlohmann::ordered_json& j) {
  RunHeader h;
  h.kind = j.value("kind", std::string{});
  if (auto it = j.find("config"); it != j.end()) {
    for (const auto& [k, v] : it->items()) h.config.emplace_back(k, v.get<std::string>());
  }
  if (auto it = j.find("inputs"); it != j.end()) {
    for (const auto& [k, v] : it->items()) h.inputs.emplace_back(k, v.get<std::string>());
  }
  return h;
}

}  // namespace posetta
