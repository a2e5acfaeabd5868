#pragma once

// Pair scoring over a plan, and the score file written by `aggregate`.
//
// Score files are JSON lines: a RunHeader line ({"kind":"scores",...}) then
// one object per pair in manifest order:
//
//   {"pair_index":0,"left":"a","right":"b","same":true,
//    "score":0.8731...,"rep_counts":[4,2],"fallback":[false,false]}

#include <array>
#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "posetta/aggregator.hpp"
#include "posetta/run_header.hpp"
#include "posetta/selector.hpp"

namespace posetta::aggregator {

struct PairScore {
  std::size_t pair_index = 0;
  PairRecord pair;
  double score = 0.0;
  std::array<int, 2> rep_counts{};
  std::array<bool, 2> fallback{};

  bool any_fallback() const noexcept { return fallback[0] || fallback[1]; }
};

/// Aggregates both sides of every planned pair and scores them by cosine
/// similarity. Baseline-only plans are flagged as fallback on both sides.
std::vector<PairScore> score_pairs(const Manifest& m,
                                   const std::vector<selector::PairPlan>& plans,
                                   const AggregationWeights& weights, FallbackPolicy policy,
                                   std::size_t workers = 1);

struct ScoreFile {
  RunHeader header;
  std::vector<PairScore> scores;
};

std::string format_score_file(const ScoreFile& file);
ScoreFile parse_score_file(const std::string& text);
void write_score_file(const ScoreFile& file, const std::filesystem::path& path);
ScoreFile read_score_file(const std::filesystem::path& path);

/// Throws ProtocolMismatch unless scores line up one-to-one with the
/// manifest pairs (ids and labels).
void check_scores_match(const std::vector<PairScore>& scores, const Manifest& m);

}  // namespace posetta::aggregator
