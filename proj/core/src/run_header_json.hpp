#pragma once

// Internal: JSON conversion for RunHeader, kept out of the public headers so
// installed consumers do not need the vendored JSON library.

#include "json.hpp"
#include "posetta/run_header.hpp"

namespace posetta {

nlohmann::ordered_json header_to_json(const RunHeader& h);
RunHeader header_from_json(const nlohmann::ordered_json& j);

}  // namespace posetta
