#pragma once

// Pair-verification accuracy with k-fold cross-validated thresholds.
//
// Pairs are split into k contiguous blocks in list order. For every fold
// the decision threshold (score >= t means "same") is chosen on the other
// k-1 folds by exhaustive search over a fixed grid, then applied to the
// held-out fold. Reported accuracy is the mean of the fold accuracies.

#include <cstddef>
#include <span>
#include <vector>

namespace posetta::protocol {

/// Threshold grid: -1.0 to +1.0 in steps of 5e-4 (4001 points).
inline constexpr int kGridSteps = 4000;
inline constexpr int kGridPoints = kGridSteps + 1;

/// Grid point i in [0, kGridPoints), computed as (i - 2000) / 2000.
constexpr double grid_threshold(int i) noexcept {
  return static_cast<double>(i - kGridSteps / 2) / static_cast<double>(kGridSteps / 2);
}

struct FoldSpec {
  int k = 10;
  std::vector<int> assignment;  // pair index -> fold id

  std::vector<std::size_t> sizes() const;
};

/// The first n % k folds get one extra pair. Throws TooFewPairs when n < k
/// and InvalidConfig when k < 2.
FoldSpec assign_folds(std::size_t n_pairs, int k);

struct ScoredPair {
  double score = 0.0;
  bool is_same = false;
};

struct ThresholdChoice {
  double threshold = -1.0;
  double train_accuracy = 0.0;
  std::size_t correct = 0;
};

/// Highest-accuracy grid threshold; ties go to the smallest threshold.
/// Throws EmptyScores, or ScoreOutOfRange for scores outside [-1, 1].
ThresholdChoice best_threshold(std::span<const ScoredPair> scores);

struct VerificationRun {
  std::size_t n_pairs = 0;
  std::vector<std::size_t> fold_sizes;
  std::vector<std::size_t> fold_correct;
  std::vector<double> fold_thresholds;
  std::vector<double> fold_accuracies;
  double mean_accuracy = 0.0;
  double fallback_rate = 0.0;
};

/// `fallback_pairs` is the number of pairs scored under a fallback; it only
/// feeds fallback_rate. Fold searches run on up to `workers` threads.
VerificationRun evaluate(std::span<const ScoredPair> pairs, const FoldSpec& folds,
                         std::size_t fallback_pairs = 0, std::size_t workers = 1);

struct DeltaReport {
  std::vector<double> fold_delta_pp;
  double mean_delta_pp = 0.0;
};

/// Accuracy of `candidate` minus `reference`, in percentage points. Throws
/// ProtocolMismatch when pair counts or fold layouts differ.
DeltaReport compare_runs(const VerificationRun& candidate, const VerificationRun& reference);

}  // namespace posetta::protocol
