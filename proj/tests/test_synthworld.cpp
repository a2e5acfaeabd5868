#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "posetta/aggregator.hpp"
#include "posetta/error.hpp"
#include "posetta/manifest.hpp"
#include "posetta/protocol.hpp"
#include "posetta/scores.hpp"
#include "posetta/selector.hpp"
#include "posetta/synthworld.hpp"

using namespace posetta;
using namespace posetta::synth;

namespace {

SyntheticWorldConfig small_world() {
  SyntheticWorldConfig c;
  c.n_identities = 30;
  c.pair_count_same = 150;
  c.pair_count_diff = 150;
  return c;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double dotf(std::span<const float> a, std::span<const float> b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += double(a[i]) * b[i];
  return s;
}

}  // namespace

TEST_CASE("config validation") {
  SyntheticWorldConfig c;
  CHECK_NOTHROW(c.validate());
  c.animator_fidelity = 1.2;
  CHECK_THROWS_AS(c.validate(), Error);
  c = {};
  c.dim = 4;
  CHECK_THROWS_AS(c.validate(), Error);
  c = {};
  c.obs_noise_scale = -0.1;
  CHECK_THROWS_AS(c.validate(), Error);
}

TEST_CASE("config text and overrides") {
  const auto c = parse_world_config(
      "# world\n"
      "dim = 32\n"
      "pose_noise_scale=0.01   # per degree\n"
      "\n"
      "yaw_signs = positive\n"
      "honor_flip = false\n");
  CHECK(c.dim == 32);
  CHECK(c.pose_noise_scale == 0.01);
  CHECK(c.yaw_signs == YawSigns::Positive);
  CHECK_FALSE(c.honor_flip);
  CHECK(c.n_identities == SyntheticWorldConfig{}.n_identities);
  CHECK_THROWS_AS(parse_world_config("colour = red\n"), Error);
  CHECK_THROWS_AS(parse_world_config("dim 32\n"), Error);
  CHECK_THROWS_AS(parse_world_config("dim = many\n"), Error);

  auto d = c;
  const std::vector<std::string> over{"seed=9", "dim=16"};
  apply_overrides(d, over);
  CHECK(d.seed == 9);
  CHECK(d.dim == 16);

  // echo parses back to the same config
  std::string text;
  for (const auto& [k, v] : d.to_key_values()) text += k + " = " + v + "\n";
  CHECK(parse_world_config(text).to_key_values() == d.to_key_values());
}

TEST_CASE("shipped config file matches the built-in defaults") {
  const auto c = load_world_config(POSETTA_SOURCE_DIR "/config/default_world.conf");
  CHECK(c.to_key_values() == SyntheticWorldConfig{}.to_key_values());
}

TEST_CASE("same seed gives byte-identical manifests") {
  auto c = small_world();
  c.seed = 7;
  const auto dir = oracle::scratch_dir("synth_det");
  save_manifest(generate_world(c), dir / "a.jsonl");
  save_manifest(generate_world(c), dir / "b.jsonl");
  CHECK(oracle::slurp(dir / "a.jsonl") == oracle::slurp(dir / "b.jsonl"));
  CHECK(oracle::slurp(dir / "a.bin") == oracle::slurp(dir / "b.bin"));
  c.seed = 8;
  save_manifest(generate_world(c), dir / "c.jsonl");
  CHECK(oracle::slurp(dir / "a.bin") != oracle::slurp(dir / "c.bin"));
}

TEST_CASE("world shape, tags and unit norms") {
  const auto c = small_world();
  const Manifest m = generate_world(c);
  CHECK(m.dim == c.dim);
  CHECK(m.pairs.size() == 300);
  CHECK(m.samples.size() == 600);
  std::size_t same = 0;
  for (const auto& p : m.pairs) {
    same += p.is_same;
    const bool ids_match = m.find(p.left)->identity_id == m.find(p.right)->identity_id;
    CHECK(ids_match == p.is_same);
  }
  CHECK(same == 150);
  for (const auto& s : m.samples) {
    CHECK(std::abs(s.yaw_deg) <= c.pose_range_deg);
    CHECK(s.has(Transform::Original));
    CHECK(s.has(Transform::Flipped));
    for (const auto& [t, v] : s.representations) CHECK(std::abs(v.norm() - 1.0) <= 1e-6);
  }
  CHECK_NOTHROW(validate(m));
}

TEST_CASE("mirror geometry") {
  const auto g = make_identity(SyntheticWorldConfig{}, 3);
  CHECK(std::abs(dot(g.prototype, g.prototype) - 1.0) < 1e-12);
  CHECK(std::abs(dot(g.prototype, g.d_left)) < 1e-12);
  CHECK(std::abs(dot(g.prototype, g.d_right)) < 1e-12);
  const auto twice = g.mirror(g.mirror(g.d_left));
  for (std::size_t i = 0; i < twice.size(); ++i) CHECK(std::abs(twice[i] - g.d_left[i]) < 1e-12);
  const auto m = g.mirror(g.d_left);
  for (std::size_t i = 0; i < m.size(); ++i) CHECK(std::abs(m[i] - g.d_right[i]) < 1e-12);
  const auto u = g.mirror(g.prototype);
  for (std::size_t i = 0; i < u.size(); ++i) CHECK(std::abs(u[i] - g.prototype[i]) < 1e-12);
}

TEST_CASE("distortion-free world is perfectly separable") {
  auto c = small_world();
  c.pose_noise_scale = 0;
  c.animator_bias_scale = 0;
  c.obs_noise_scale = 0;
  const Manifest m = generate_world(c);
  const auto plans = selector::plan_all(m);
  for (auto w : {aggregator::AggregationWeights{}, aggregator::AggregationWeights{1.0, 0.0}}) {
    const auto scores = aggregator::score_pairs(m, plans, w, aggregator::FallbackPolicy::Strict);
    double min_same = 2, max_diff = -2;
    std::vector<protocol::ScoredPair> sp;
    for (const auto& s : scores) {
      if (s.pair.is_same) {
        min_same = std::min(min_same, s.score);
      } else {
        max_diff = std::max(max_diff, s.score);
      }
      sp.push_back({s.score, s.pair.is_same});
    }
    CHECK(min_same >= 1.0 - 1e-6);
    CHECK(max_diff < min_same);
    CHECK(protocol::best_threshold(sp).train_accuracy == 1.0);

    // held-out folds: the smallest-threshold rule can only reject a
    // different-identity pair scoring above every training negative
    const auto folds = protocol::assign_folds(sp.size(), 10);
    const auto run = protocol::evaluate(sp, folds);
    for (std::size_t i = 0; i < sp.size(); ++i) {
      if (sp[i].is_same) CHECK(sp[i].score >= run.fold_thresholds[folds.assignment[i]]);
    }
    CHECK(run.mean_accuracy >= 0.99);
  }

  const std::vector<std::uint64_t> seeds{0, 1};
  const auto grid = default_weight_grid();
  const auto rows = run_ablation(c, grid, seeds);
  for (const auto& row : rows) CHECK(row.accuracies == rows.front().accuracies);
}

TEST_CASE("perfect animator reproduces the driving pose exactly") {
  auto c = small_world();
  c.animator_fidelity = 1.0;
  c.animator_bias_scale = 0;
  c.obs_noise_scale = 0;
  const Manifest m = generate_world(c);
  std::size_t checked = 0, distinct = 0;
  for (const auto& p : m.pairs) {
    if (!p.is_same) continue;
    const auto* l = m.find(p.left);
    const auto* r = m.find(p.right);
    const bool left_src = std::abs(l->yaw_deg) <= std::abs(r->yaw_deg);
    const auto* src = left_src ? l : r;
    const auto* drv = left_src ? r : l;
    const double cos = dotf(src->find(Transform::Animated)->values(),
                            drv->find(Transform::Original)->values());
    CHECK(cos == doctest::Approx(1.0).epsilon(1e-6));
    distinct += dotf(src->find(Transform::Original)->values(),
                     drv->find(Transform::Original)->values()) < 1.0 - 1e-4;
    ++checked;
  }
  CHECK(checked == 150);
  CHECK(distinct > 100);
}

TEST_CASE("flip rule never triggers when all yaws share a sign") {
  auto c = small_world();
  c.yaw_signs = YawSigns::Positive;
  const std::vector<std::uint64_t> seeds{0, 1, 2};
  const auto res = run_flip_ablation(c, seeds);
  CHECK(res.opposite_sign_fraction == 0.0);
  CHECK(res.with_flip == res.without_flip);
}

TEST_CASE("baseline accuracy does not improve as pose distortion grows") {
  std::vector<std::uint64_t> seeds;
  for (std::uint64_t s = 0; s < 30; ++s) seeds.push_back(s);
  const std::vector<aggregator::AggregationWeights> baseline{{1.0, 0.0}};
  double prev = 2.0;
  for (double kp : {0.0, 0.002, 0.004, 0.008}) {
    SyntheticWorldConfig c;
    c.pose_noise_scale = kp;
    const double acc = run_ablation(c, baseline, seeds, 10, 4).front().mean_accuracy;
    MESSAGE("k_p=" << kp << " baseline=" << acc);
    CHECK(acc <= prev);
    prev = acc;
  }
}

TEST_CASE("mean and sample std") {
  const std::vector<double> v{1, 2, 3, 4};
  CHECK(mean(v) == 2.5);
  CHECK(sample_std(v) == doctest::Approx(std::sqrt(5.0 / 3.0)));
}
