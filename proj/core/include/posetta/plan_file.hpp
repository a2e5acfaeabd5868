#pragma once

// Plan files are JSON lines: a RunHeader line ({"kind":"plan",...}) then
// one object per pair, in manifest pair order:
//
//   {"pair_index":0,"left":"a","right":"b","same":true,
//    "source":"a","driving":"b","flip_source_before_animation":true,
//    "baseline_only":false,
//    "required":{"a":["original","flipped","animated","animated_flipped"],
//                "b":["original","flipped"]}}
//
// Baseline-only entries carry null source/driving and require the real
// pair of representations on both sides.

#include <filesystem>
#include <string>
#include <vector>

#include "posetta/run_header.hpp"
#include "posetta/selector.hpp"

namespace posetta::selector {

struct PlanFile {
  RunHeader header;
  std::vector<PairPlan> plans;
};

std::string format_plan_file(const PlanFile& file);
PlanFile parse_plan_file(const std::string& text);

void write_plan_file(const PlanFile& file, const std::filesystem::path& path);
PlanFile read_plan_file(const std::filesystem::path& path);

/// Throws ProtocolMismatch unless the plans line up with the manifest pairs.
void check_plans_match(const std::vector<PairPlan>& plans, const Manifest& m);

}  // namespace posetta::selector
