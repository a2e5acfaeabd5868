#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "posetta/error.hpp"
#include "posetta/protocol.hpp"

using namespace posetta;
using namespace posetta::protocol;

namespace {

std::vector<ScoredPair> random_pairs(std::mt19937_64& g, std::size_t n, double sep) {
  std::vector<ScoredPair> out(n);
  std::normal_distribution<double> noise(0, 0.25);
  for (auto& p : out) {
    p.is_same = g() % 2 == 0;
    p.score = std::clamp((p.is_same ? sep : -sep) + noise(g), -1.0, 1.0);
  }
  return out;
}

}  // namespace

TEST_CASE("grid endpoints and step") {
  CHECK(grid_threshold(0) == -1.0);
  CHECK(grid_threshold(2000) == 0.0);
  CHECK(grid_threshold(4000) == 1.0);
  CHECK(grid_threshold(2001) == 5e-4);
}

TEST_CASE("contiguous folds, remainder to the first folds") {
  const auto f = assign_folds(25, 10);
  CHECK(f.sizes() == std::vector<std::size_t>{3, 3, 3, 3, 3, 2, 2, 2, 2, 2});
  CHECK(f.assignment.front() == 0);
  CHECK(f.assignment[3] == 1);
  CHECK(f.assignment.back() == 9);
  CHECK(std::is_sorted(f.assignment.begin(), f.assignment.end()));

  try {
    assign_folds(5, 10);
    FAIL("no throw");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::TooFewPairs);
  }
  CHECK_THROWS_AS(assign_folds(10, 1), Error);
}

TEST_CASE("threshold choice examples") {
  std::vector<ScoredPair> two{{0.9, true}, {0.1, false}};
  auto t = best_threshold(two);
  CHECK(t.threshold == doctest::Approx(0.1005).epsilon(1e-12));
  CHECK(t.correct == 2);

  std::vector<ScoredPair> all_same{{0.3, true}, {-0.2, true}};
  t = best_threshold(all_same);
  CHECK(t.threshold == -1.0);
  CHECK(t.train_accuracy == 1.0);

  std::vector<ScoredPair> none;
  CHECK_THROWS_AS(best_threshold(none), Error);
  std::vector<ScoredPair> bad{{1.5, true}};
  try {
    best_threshold(bad);
    FAIL("no throw");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::ScoreOutOfRange);
  }
}

TEST_CASE("evaluate agrees with the brute-force reference") {
  std::mt19937_64 g(21);
  for (int inst = 0; inst < 10; ++inst) {
    const int k = 2 + static_cast<int>(g() % 9);
    const std::size_t n = static_cast<std::size_t>(k) + g() % 120;
    auto pairs = random_pairs(g, n, 0.2);
    // some scores exactly on grid points to exercise >= at the boundary
    for (std::size_t i = 0; i < n; i += 3) pairs[i].score = grid_threshold(static_cast<int>(g() % 4001));
    std::vector<oracle::Pair> ref;
    for (const auto& p : pairs) ref.push_back({p.score, p.is_same});

    const auto run = evaluate(pairs, assign_folds(n, k));
    const auto want = oracle::brute_force_evaluate(ref, k);
    CHECK(run.fold_correct == want.correct);
    CHECK(run.fold_thresholds == want.thresholds);
    CHECK(run.mean_accuracy == want.mean);
  }
}

TEST_CASE("accuracy bounds and worker invariance") {
  std::mt19937_64 g(2);
  const auto pairs = random_pairs(g, 613, 0.3);
  const auto folds = assign_folds(pairs.size(), 10);
  const auto one = evaluate(pairs, folds, 7, 1);
  const auto many = evaluate(pairs, folds, 7, 8);
  CHECK(one.fold_correct == many.fold_correct);
  CHECK(one.fold_thresholds == many.fold_thresholds);
  CHECK(one.mean_accuracy == many.mean_accuracy);
  CHECK(one.fallback_rate == doctest::Approx(7.0 / 613));
  for (double a : one.fold_accuracies) {
    CHECK(a >= 0.0);
    CHECK(a <= 1.0);
  }
  CHECK(one.mean_accuracy >= *std::min_element(one.fold_accuracies.begin(), one.fold_accuracies.end()));
  CHECK(one.mean_accuracy <= *std::max_element(one.fold_accuracies.begin(), one.fold_accuracies.end()));
}

TEST_CASE("negated scores with inverted labels keep the best training accuracy") {
  std::mt19937_64 g(13);
  for (int inst = 0; inst < 20; ++inst) {
    auto pairs = random_pairs(g, 150, 0.15);
    // keep scores off the grid so the two decision rules see the same partitions
    for (auto& p : pairs) p.score = std::clamp(p.score, -0.99, 0.99) + 1e-7;
    std::vector<ScoredPair> flipped;
    for (const auto& p : pairs) flipped.push_back({-p.score, !p.is_same});
    CHECK(best_threshold(pairs).correct == best_threshold(flipped).correct);
  }
}

TEST_CASE("coin-flip scores give chance accuracy") {
  double sum = 0;
  for (int seed = 0; seed < 20; ++seed) {
    std::mt19937_64 g(1000 + seed);
    std::uniform_real_distribution<double> u(-1, 1);
    std::vector<ScoredPair> pairs(600);
    for (auto& p : pairs) p = {u(g), g() % 2 == 0};
    sum += evaluate(pairs, assign_folds(600, 10)).mean_accuracy;
  }
  CHECK(std::abs(sum / 20 - 0.5) <= 0.06);
}

TEST_CASE("run comparison in percentage points") {
  VerificationRun a, b;
  a.n_pairs = b.n_pairs = 20;
  a.fold_sizes = b.fold_sizes = {10, 10};
  a.fold_accuracies = {0.9, 0.8};
  b.fold_accuracies = {0.8, 0.8};
  a.mean_accuracy = 0.85;
  b.mean_accuracy = 0.80;
  const auto d = compare_runs(a, b);
  CHECK(d.mean_delta_pp == doctest::Approx(5.0));
  CHECK(d.fold_delta_pp[0] == doctest::Approx(10.0));
  CHECK(d.fold_delta_pp[1] == doctest::Approx(0.0));
  b.n_pairs = 21;
  try {
    compare_runs(a, b);
    FAIL("no throw");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::ProtocolMismatch);
  }
}
