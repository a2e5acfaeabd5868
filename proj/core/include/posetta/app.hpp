#pragma once

// Command layer behind the posetta tool. Every command reads validated
// inputs, writes machine-readable outputs that echo the resolved
// configuration and input digests, and maps failures to exit codes
// (2 validation, 3 I/O, 4 computation, 5 coverage gap under strict policy).

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "posetta/aggregator.hpp"

namespace posetta::app {

enum class Command {
  Plan,
  Aggregate,
  Verify,
  Compare,
  Simulate,
  AblateWeights,
  AblateFlip,
  Pipeline,
};

std::string_view to_string(Command c) noexcept;
Command parse_command(std::string_view name);

struct RunConfig {
  Command command = Command::Pipeline;
  std::filesystem::path manifest;
  std::filesystem::path plan;
  std::filesystem::path scores;
  std::filesystem::path out;
  std::filesystem::path world_config;
  std::vector<std::string> world_overrides;
  std::vector<std::filesystem::path> reference_reports;
  std::vector<std::filesystem::path> candidate_reports;
  std::string reference_label = "Baseline";
  std::string candidate_label = "TTA";
  std::string dataset;
  aggregator::AggregationWeights weights{};
  int folds = 10;
  aggregator::FallbackPolicy policy = aggregator::FallbackPolicy::RealFallback;
  std::vector<std::uint64_t> seeds;
  std::size_t workers = 1;
};

/// Accepts "3", "0-19" and comma-separated mixes such as "0-4,9".
std::vector<std::uint64_t> parse_seed_list(std::string_view text);

/// Runs one command; throws posetta::Error on failure.
void execute(const RunConfig& cfg, std::ostream& out);

/// plan -> coverage check -> aggregate -> verify -> report, writing
/// plan.jsonl, scores.jsonl, report.json and report.txt under cfg.out.
void run_pipeline(const RunConfig& cfg, std::ostream& out);

/// execute() with error handling: prints the error to `err` and returns
/// the mapped exit code, or 0 on success.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace posetta::app
