#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "posetta/aggregator.hpp"
#include "posetta/error.hpp"
#include "posetta/scores.hpp"
#include "posetta/selector.hpp"

using namespace posetta;
using namespace posetta::aggregator;

namespace {

constexpr auto O = Transform::Original;
constexpr auto F = Transform::Flipped;
constexpr auto A = Transform::Animated;
constexpr auto AF = Transform::AnimatedFlipped;

TaggedRep tagged(Transform t, const std::vector<float>& v) {
  return {RepresentationTag::of(t), v};
}

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no throw");
  return Errc::InvalidConfig;
}

std::vector<float> random_unit(std::mt19937_64& g, std::size_t dim) {
  std::normal_distribution<float> n;
  std::vector<float> v(dim);
  double s = 0;
  for (auto& x : v) {
    x = n(g);
    s += double(x) * x;
  }
  for (auto& x : v) x = static_cast<float>(x / std::sqrt(s));
  return v;
}

}  // namespace

TEST_CASE("plain aggregation examples") {
  std::vector<EmbeddingVector> one{EmbeddingVector({1, 0})};
  auto f = aggregate_plain(one);
  CHECK(f.vector[0] == 1.0);
  CHECK(f.vector[1] == 0.0);
  CHECK(f.rep_count == 1);

  std::vector<EmbeddingVector> two{EmbeddingVector({1, 0}), EmbeddingVector({0, 1})};
  f = aggregate_plain(two);
  // mean (0.5, 0.5), norm 1/sqrt(2)
  CHECK(f.vector[0] == doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK(f.vector[1] == doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-12));

  std::vector<EmbeddingVector> cancel{EmbeddingVector({1, 0}), EmbeddingVector({-1, 0})};
  CHECK(code_of([&] { aggregate_plain(cancel); }) == Errc::DegenerateSum);

  CHECK(code_of([] { aggregate_plain({}); }) == Errc::EmptyRepSet);
  std::vector<EmbeddingVector> ragged{EmbeddingVector({1, 0}), EmbeddingVector({1, 0, 0})};
  CHECK(code_of([&] { aggregate_plain(ragged); }) == Errc::DimMismatch);
}

TEST_CASE("weighted aggregation examples") {
  const std::vector<float> e1{1, 0}, e2{0, 1};
  std::vector<TaggedRep> reps{tagged(O, e1), tagged(A, e2)};

  // pre-norm (0.375, 0.125); norm sqrt(0.15625)
  auto f = aggregate_weighted(reps, {0.75, 0.25});
  const double n = std::sqrt(0.375 * 0.375 + 0.125 * 0.125);
  CHECK(f.vector[0] == doctest::Approx(0.375 / n).epsilon(1e-12));
  CHECK(f.vector[1] == doctest::Approx(0.125 / n).epsilon(1e-12));
  CHECK(f.vector[0] == doctest::Approx(0.9487).epsilon(1e-4));
  CHECK(f.vector[1] == doctest::Approx(0.3162).epsilon(1e-3));

  f = aggregate_weighted(reps, {1.0, 0.0});
  CHECK(f.vector[0] == 1.0);
  CHECK(f.vector[1] == 0.0);

  const std::vector<float> same{0.6f, 0.8f};
  std::vector<TaggedRep> twins{tagged(O, same), tagged(A, same)};
  for (auto w : {AggregationWeights{0.75, 0.25}, AggregationWeights{0.1, 3.0}}) {
    f = aggregate_weighted(twins, w);
    CHECK(f.vector[0] == doctest::Approx(0.6).epsilon(1e-7));
    CHECK(f.vector[1] == doctest::Approx(0.8).epsilon(1e-7));
  }
}

TEST_CASE("weighted aggregation errors") {
  const std::vector<float> e1{1, 0}, e3{1, 0, 0};
  std::vector<TaggedRep> real_only{tagged(O, e1), tagged(F, e1)};
  CHECK(code_of([&] { aggregate_weighted(real_only, {0.0, 1.0}); }) == Errc::AllZeroWeight);
  CHECK(code_of([&] { aggregate_weighted({}, {}); }) == Errc::EmptyRepSet);
  std::vector<TaggedRep> ragged{tagged(O, e1), tagged(F, e3)};
  CHECK(code_of([&] { aggregate_weighted(ragged, {}); }) == Errc::DimMismatch);
  CHECK(code_of([&] { aggregate_weighted(real_only, {-0.1, 1.0}); }) == Errc::InvalidWeights);
  CHECK(code_of([&] { aggregate_weighted(real_only, {0.0, 0.0}); }) == Errc::InvalidWeights);
}

TEST_CASE("weighted aggregation matches the scalar oracle") {
  std::mt19937_64 g(5);
  for (int c = 0; c < 200; ++c) {
    const std::size_t dim = 4 + g() % 100;
    const std::size_t count = 1 + g() % 8;
    std::vector<std::vector<float>> store;
    std::vector<oracle::Rep> ref;
    std::vector<TaggedRep> reps;
    for (std::size_t r = 0; r < count; ++r) store.push_back(random_unit(g, dim));
    for (std::size_t r = 0; r < count; ++r) {
      const Transform t = kAllTransforms[g() % 4];
      ref.push_back({provenance_of(t) == Provenance::Synthetic, store[r]});
      reps.push_back(tagged(t, store[r]));
    }
    const AggregationWeights w{0.05 + std::uniform_real_distribution<>(0, 1)(g),
                               0.05 + std::uniform_real_distribution<>(0, 1)(g)};
    const auto expect = oracle::weighted_aggregate(ref, w.w_real, w.w_syn);
    REQUIRE(expect.has_value());
    const auto got = aggregate_weighted(reps, w);
    for (std::size_t i = 0; i < dim; ++i) CHECK(std::abs(got.vector[i] - (*expect)[i]) <= 1e-9);
  }
}

TEST_CASE("weight scale and summation order do not matter") {
  std::mt19937_64 g(9);
  for (int c = 0; c < 50; ++c) {
    std::vector<std::vector<float>> store;
    for (Transform t : kAllTransforms) store.push_back(random_unit(g, 32)), (void)t;
    std::vector<TaggedRep> reps;
    for (std::size_t i = 0; i < 4; ++i) reps.push_back(tagged(kAllTransforms[i], store[i]));
    const auto base = aggregate_weighted(reps, {0.75, 0.25});
    const auto scaled = aggregate_weighted(reps, {0.75 * 7.3, 0.25 * 7.3});
    for (std::size_t i = 0; i < 32; ++i) CHECK(std::abs(base.vector[i] - scaled.vector[i]) <= 1e-9);

    std::shuffle(reps.begin(), reps.end(), g);
    const auto perm = aggregate_weighted(reps, {0.75, 0.25});
    for (std::size_t i = 0; i < 32; ++i) CHECK(std::abs(base.vector[i] - perm.vector[i]) <= 1e-7);
  }
}

TEST_CASE("zero synthetic weight equals the plain real-pair baseline") {
  std::mt19937_64 g(3);
  std::vector<std::vector<float>> v;
  for (int i = 0; i < 4; ++i) v.push_back(random_unit(g, 64));
  std::vector<TaggedRep> all{tagged(O, v[0]), tagged(F, v[1]), tagged(A, v[2]), tagged(AF, v[3])};
  std::vector<EmbeddingVector> real{EmbeddingVector(v[0]), EmbeddingVector(v[1])};
  const auto w = aggregate_weighted(all, {1.0, 0.0});
  const auto p = aggregate_plain(real);
  for (std::size_t i = 0; i < 64; ++i) CHECK(std::abs(w.vector[i] - p.vector[i]) <= 1e-9);
}

TEST_CASE("per-sample aggregation and fallback policy") {
  std::mt19937_64 g(4);
  FaceSample s{"s", "x", 3.0, {}};
  for (Transform t : kAllTransforms) s.representations.emplace(t, EmbeddingVector(random_unit(g, 16)));
  const std::vector<Transform> four{O, F, A, AF}, two{O, F};

  auto f = aggregate_for_sample(s, four, {}, FallbackPolicy::RealFallback);
  CHECK(f.rep_count == 4);
  CHECK_FALSE(f.fallback_used);

  FaceSample missing = s;
  missing.representations.erase(A);
  f = aggregate_for_sample(missing, four, {}, FallbackPolicy::RealFallback);
  CHECK(f.rep_count == 2);
  CHECK(f.fallback_used);
  CHECK(code_of([&] { aggregate_for_sample(missing, four, {}, FallbackPolicy::Strict); }) ==
        Errc::MissingRepresentation);

  FaceSample no_flip = s;
  no_flip.representations.erase(F);
  CHECK(code_of([&] { aggregate_for_sample(no_flip, four, {}, FallbackPolicy::RealFallback); }) ==
        Errc::MissingRepresentation);

  // driving side: equals the plain O/F mean whatever the weights
  std::vector<EmbeddingVector> real{*s.find(O), *s.find(F)};
  const auto plain = aggregate_plain(real);
  for (auto w : {AggregationWeights{}, AggregationWeights{0.0, 1.0}, AggregationWeights{1.0, 0.0}}) {
    f = aggregate_for_sample(s, two, w, FallbackPolicy::Strict);
    CHECK(f.rep_count == 2);
    for (std::size_t i = 0; i < 16; ++i) CHECK(std::abs(f.vector[i] - plain.vector[i]) <= 1e-12);
  }
}

TEST_CASE("cosine similarity") {
  AggregatedFeature a{{1, 0}, 1, false}, b{{0, 1}, 1, false}, c{{0.9487, 0.3162}, 1, false};
  CHECK(cosine_similarity(a, a) == 1.0);
  CHECK(cosine_similarity(a, b) == 0.0);
  CHECK(cosine_similarity(c, a) == doctest::Approx(0.9487));
  AggregatedFeature big{{1.0 + 1e-12, 0}, 1, false};
  CHECK(cosine_similarity(big, big) == 1.0);
  AggregatedFeature d3{{1, 0, 0}, 1, false};
  CHECK(code_of([&] { cosine_similarity(a, d3); }) == Errc::DimMismatch);
}

TEST_CASE("policy names") {
  CHECK(parse_policy("strict") == FallbackPolicy::Strict);
  CHECK(parse_policy("real-fallback") == FallbackPolicy::RealFallback);
  CHECK(to_string(FallbackPolicy::RealFallback) == "real-fallback");
  CHECK_THROWS_AS(parse_policy("lenient"), Error);
}

TEST_CASE("pair scoring and score file round-trip") {
  std::mt19937_64 g(8);
  Manifest m;
  m.dim = 8;
  const auto add = [&](std::string id, double yaw, bool animated) {
    FaceSample s{id, "x", yaw, {}};
    for (Transform t : kAllTransforms) {
      if (!animated && provenance_of(t) == Provenance::Synthetic) continue;
      s.representations.emplace(t, EmbeddingVector(random_unit(g, 8)));
    }
    m.samples.push_back(std::move(s));
  };
  add("a", 5, true);
  add("b", 40, false);
  add("c", -2, false);  // would be source but has no animation
  m.pairs = {{"a", "b", true}, {"c", "b", false}};
  m.reindex();
  const auto plans = selector::plan_all(m);

  const auto scores = score_pairs(m, plans, {}, FallbackPolicy::RealFallback, 3);
  REQUIRE(scores.size() == 2);
  CHECK(scores[0].rep_counts == std::array<int, 2>{4, 2});
  CHECK_FALSE(scores[0].any_fallback());
  CHECK(scores[1].rep_counts == std::array<int, 2>{2, 2});
  CHECK(scores[1].fallback[0]);
  CHECK_THROWS_AS(score_pairs(m, plans, {}, FallbackPolicy::Strict, 1), Error);

  // score = cosine of the independently aggregated sides
  const auto sa = aggregate_for_sample(*m.find("a"), plans[0].required_for("a"), {},
                                       FallbackPolicy::Strict);
  const auto sb = aggregate_for_sample(*m.find("b"), plans[0].required_for("b"), {},
                                       FallbackPolicy::Strict);
  CHECK(scores[0].score == cosine_similarity(sa, sb));

  ScoreFile file;
  file.header.kind = "scores";
  file.header.set_config("w_real", "0.75");
  file.scores = scores;
  const std::string text = format_score_file(file);
  const auto back = parse_score_file(text);
  CHECK(format_score_file(back) == text);
  CHECK(back.scores[0].score == scores[0].score);
  CHECK_NOTHROW(check_scores_match(back.scores, m));
  m.pairs[1].is_same = true;
  CHECK_THROWS_AS(check_scores_match(back.scores, m), Error);
}
