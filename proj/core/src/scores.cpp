#include "posetta/scores.hpp"

#include "json_lines.hpp"
#include "posetta/error.hpp"
#include "posetta/parallel.hpp"
#include "run_header_json.hpp"

namespace posetta::aggregator {

std::vector<PairScore> score_pairs(const Manifest& m,
                                   const std::vector<selector::PairPlan>& plans,
                                   const AggregationWeights& weights, FallbackPolicy policy,
                                   std::size_t workers) {
  weights.validate();
  std::vector<PairScore> out(plans.size());
  parallel_for(plans.size(), workers, [&](std::size_t i) {
    const auto& p = plans[i];
    const FaceSample* left = m.find(p.pair.left);
    const FaceSample* right = m.find(p.pair.right);
    if (left == nullptr || right == nullptr) {
      throw Error(Errc::UnknownSample, "plan entry " + std::to_string(p.pair_index) +
                                           " references an unknown sample");
    }
    const auto lreq = p.required_for(left->sample_id);
    const auto rreq = p.required_for(right->sample_id);
    const AggregatedFeature lf = aggregate_for_sample(*left, lreq, weights, policy);
    const AggregatedFeature rf = aggregate_for_sample(*right, rreq, weights, policy);

    PairScore& s = out[i];
    s.pair_index = p.pair_index;
    s.pair = p.pair;
    s.score = cosine_similarity(lf, rf);
    s.rep_counts = {lf.rep_count, rf.rep_count};
    s.fallback = {lf.fallback_used || p.baseline_only(), rf.fallback_used || p.baseline_only()};
  });
  return out;
}

std::string format_score_file(const ScoreFile& file) {
  std::string out = header_to_json(file.header).dump() + '\n';
  for (const auto& s : file.scores) {
    nlohmann::ordered_json line;
    line["pair_index"] = s.pair_index;
    line["left"] = s.pair.left;
    line["right"] = s.pair.right;
    line["same"] = s.pair.is_same;
    line["score"] = s.score;
    line["rep_counts"] = {s.rep_counts[0], s.rep_counts[1]};
    line["fallback"] = {s.fallback[0], s.fallback[1]};
    out += line.dump() + '\n';
  }
  return out;
}

ScoreFile parse_score_file(const std::string& text) {
  ScoreFile file;
  bool have_header = false;
  for (const auto& obj : detail::parse_lines(text, "scores")) {
    try {
      if (obj.contains("kind")) {
        file.header = header_from_json(obj);
        have_header = true;
        continue;
      }
      PairScore s;
      s.pair_index = obj.at("pair_index").get<std::size_t>();
      s.pair.left = obj.at("left").get<std::string>();
      s.pair.right = obj.at("right").get<std::string>();
      s.pair.is_same = obj.at("same").get<bool>();
      s.score = obj.at("score").get<double>();
      const auto& rc = obj.at("rep_counts");
      const auto& fb = obj.at("fallback");
      s.rep_counts = {rc.at(0).get<int>(), rc.at(1).get<int>()};
      s.fallback = {fb.at(0).get<bool>(), fb.at(1).get<bool>()};
      file.scores.push_back(std::move(s));
    } catch (const nlohmann::json::exception& e) {
      throw Error(Errc::SchemaViolation, std::string("score entry: ") + e.what());
    }
  }
  if (!have_header) throw Error(Errc::SchemaViolation, "score file has no header line");
  return file;
}

void write_score_file(const ScoreFile& file, const std::filesystem::path& path) {
  detail::write_text(path, format_score_file(file));
}

ScoreFile read_score_file(const std::filesystem::path& path) {
  return parse_score_file(detail::read_text(path));
}

void check_scores_match(const std::vector<PairScore>& scores, const Manifest& m) {
  if (scores.size() != m.pairs.size()) {
    throw Error(Errc::ProtocolMismatch, "score file has " + std::to_string(scores.size()) +
                                            " pairs, manifest has " +
                                            std::to_string(m.pairs.size()));
  }
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (scores[i].pair_index != i || !(scores[i].pair == m.pairs[i])) {
      throw Error(Errc::ProtocolMismatch,
                  "score entry " + std::to_string(i) + " does not match manifest pair");
    }
  }
}

}  // namespace posetta::aggregator
