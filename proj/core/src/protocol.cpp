#include "posetta/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "posetta/error.hpp"
#include "posetta/parallel.hpp"

namespace posetta::protocol {

std::vector<std::size_t> FoldSpec::sizes() const {
  std::vector<std::size_t> out(static_cast<std::size_t>(std::max(k, 0)), 0);
  for (int f : assignment) ++out.at(static_cast<std::size_t>(f));
  return out;
}

FoldSpec assign_folds(std::size_t n_pairs, int k) {
  if (k < 2) throw Error(Errc::InvalidConfig, "fold count must be >= 2");
  const auto kk = static_cast<std::size_t>(k);
  if (n_pairs < kk) {
    throw Error(Errc::TooFewPairs, std::to_string(n_pairs) + " pairs cannot fill " +
                                       std::to_string(k) + " folds");
  }
  FoldSpec spec;
  spec.k = k;
  spec.assignment.reserve(n_pairs);
  const std::size_t base = n_pairs / kk;
  const std::size_t extra = n_pairs % kk;
  for (std::size_t f = 0; f < kk; ++f) {
    const std::size_t size = base + (f < extra ? 1 : 0);
    spec.assignment.insert(spec.assignment.end(), size, static_cast<int>(f));
  }
  return spec;
}

ThresholdChoice best_threshold(std::span<const ScoredPair> scores) {
  if (scores.empty()) throw Error(Errc::EmptyScores, "no scores to threshold");

  std::vector<ScoredPair> sorted(scores.begin(), scores.end());
  std::size_t total_same = 0;
  for (const auto& s : sorted) {
    if (!(s.score >= -1.0 && s.score <= 1.0)) {
      throw Error(Errc::ScoreOutOfRange, "score " + std::to_string(s.score) + " outside [-1, 1]");
    }
    total_same += s.is_same ? 1 : 0;
  }
  std::sort(sorted.begin(), sorted.end(),
            [](const ScoredPair& a, const ScoredPair& b) { return a.score < b.score; });

  // Sweep the grid upwards; `below` pairs have score < t and are predicted
  // "different". correct = diff pairs below t + same pairs at or above t.
  std::size_t below = 0;
  std::size_t same_below = 0;
  ThresholdChoice best;
  bool first = true;
  for (int i = 0; i < kGridPoints; ++i) {
    const double t = grid_threshold(i);
    while (below < sorted.size() && sorted[below].score < t) {
      same_below += sorted[below].is_same ? 1 : 0;
      ++below;
    }
    const std::size_t diff_below = below - same_below;
    const std::size_t correct = diff_below + (total_same - same_below);
    if (first || correct > best.correct) {
      best.threshold = t;
      best.correct = correct;
      first = false;
    }
  }
  best.train_accuracy = static_cast<double>(best.correct) / static_cast<double>(sorted.size());
  return best;
}

VerificationRun evaluate(std::span<const ScoredPair> pairs, const FoldSpec& folds,
                         std::size_t fallback_pairs, std::size_t workers) {
  if (folds.assignment.size() != pairs.size()) {
    throw Error(Errc::FoldMismatch, "fold assignment covers " +
                                        std::to_string(folds.assignment.size()) +
                                        " pairs, scores cover " + std::to_string(pairs.size()));
  }
  if (folds.k < 2) throw Error(Errc::FoldMismatch, "fold count must be >= 2");
  for (int f : folds.assignment) {
    if (f < 0 || f >= folds.k) throw Error(Errc::FoldMismatch, "fold id out of range");
  }
  const auto k = static_cast<std::size_t>(folds.k);

  VerificationRun run;
  run.n_pairs = pairs.size();
  run.fold_sizes = folds.sizes();
  for (std::size_t size : run.fold_sizes) {
    if (size == 0) throw Error(Errc::FoldMismatch, "empty fold");
  }
  run.fold_correct.assign(k, 0);
  run.fold_thresholds.assign(k, 0.0);
  run.fold_accuracies.assign(k, 0.0);

  parallel_for(k, workers, [&](std::size_t f) {
    std::vector<ScoredPair> train;
    train.reserve(pairs.size() - run.fold_sizes[f]);
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      if (static_cast<std::size_t>(folds.assignment[i]) != f) train.push_back(pairs[i]);
    }
    const double t = best_threshold(train).threshold;
    std::size_t correct = 0;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      if (static_cast<std::size_t>(folds.assignment[i]) != f) continue;
      correct += ((pairs[i].score >= t) == pairs[i].is_same) ? 1 : 0;
    }
    run.fold_thresholds[f] = t;
    run.fold_correct[f] = correct;
    run.fold_accuracies[f] =
        static_cast<double>(correct) / static_cast<double>(run.fold_sizes[f]);
  });

  double sum = 0.0;
  for (double a : run.fold_accuracies) sum += a;
  run.mean_accuracy = sum / static_cast<double>(k);
  run.fallback_rate =
      pairs.empty() ? 0.0 : static_cast<double>(fallback_pairs) / static_cast<double>(pairs.size());
  return run;
}

DeltaReport compare_runs(const VerificationRun& candidate, const VerificationRun& reference) {
  if (candidate.n_pairs != reference.n_pairs) {
    throw Error(Errc::ProtocolMismatch, "runs cover " + std::to_string(candidate.n_pairs) +
                                            " and " + std::to_string(reference.n_pairs) +
                                            " pairs");
  }
  if (candidate.fold_sizes != reference.fold_sizes ||
      candidate.fold_accuracies.size() != reference.fold_accuracies.size()) {
    throw Error(Errc::ProtocolMismatch, "runs use different fold layouts");
  }
  DeltaReport d;
  d.fold_delta_pp.reserve(candidate.fold_accuracies.size());
  for (std::size_t f = 0; f < candidate.fold_accuracies.size(); ++f) {
    d.fold_delta_pp.push_back(100.0 *
                              (candidate.fold_accuracies[f] - reference.fold_accuracies[f]));
  }
  d.mean_delta_pp = 100.0 * (candidate.mean_accuracy - reference.mean_accuracy);
  return d;
}

}  // namespace posetta::protocol
