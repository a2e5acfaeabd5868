#include <benchmark/benchmark.h>

#include <random>

#include "posetta/aggregator.hpp"
#include "posetta/protocol.hpp"
#include "posetta/scores.hpp"
#include "posetta/selector.hpp"
#include "posetta/synthworld.hpp"

using namespace posetta;

static void BM_AggregateWeighted(benchmark::State& state) {
  const auto dim = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 g(1);
  std::normal_distribution<float> n;
  std::vector<std::vector<float>> v(4, std::vector<float>(dim));
  for (auto& vec : v)
    for (auto& x : vec) x = n(g);
  std::vector<aggregator::TaggedRep> reps;
  for (std::size_t i = 0; i < 4; ++i) reps.push_back({RepresentationTag::of(kAllTransforms[i]), v[i]});
  for (auto _ : state) benchmark::DoNotOptimize(aggregator::aggregate_weighted(reps, {}));
}
BENCHMARK(BM_AggregateWeighted)->Arg(64)->Arg(512);

static void BM_Evaluate(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 g(2);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<protocol::ScoredPair> pairs(n);
  for (auto& p : pairs) p = {u(g), g() % 2 == 0};
  const auto folds = protocol::assign_folds(n, 10);
  for (auto _ : state) benchmark::DoNotOptimize(protocol::evaluate(pairs, folds));
}
BENCHMARK(BM_Evaluate)->Arg(600)->Arg(6000)->Unit(benchmark::kMillisecond);

static void BM_GenerateWorld(benchmark::State& state) {
  synth::SyntheticWorldConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(synth::generate_world(cfg));
}
BENCHMARK(BM_GenerateWorld)->Unit(benchmark::kMillisecond);

static void BM_ScorePairs(benchmark::State& state) {
  const auto m = synth::generate_world(synth::SyntheticWorldConfig{});
  const auto plans = selector::plan_all(m);
  const auto workers = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        aggregator::score_pairs(m, plans, {}, aggregator::FallbackPolicy::RealFallback, workers));
  }
}
BENCHMARK(BM_ScorePairs)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
