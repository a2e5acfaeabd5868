#include "posetta/synthworld.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "posetta/error.hpp"
#include "posetta/parallel.hpp"
#include "posetta/rng.hpp"
#include "posetta/scores.hpp"
#include "posetta/selector.hpp"

namespace posetta::synth {

namespace {

using Vec = std::vector<double>;

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void normalize(Vec& v) {
  const double n = std::sqrt(dot(v, v));
  for (double& x : v) x /= n;
}

Vec gaussian(CounterRng& rng, std::size_t dim) {
  Vec v(dim);
  for (double& x : v) x = rng.normal();
  return v;
}

/// Removes the components of `v` along each (unit) vector in `basis`.
void orthogonalize(Vec& v, std::initializer_list<const Vec*> basis) {
  for (const Vec* b : basis) {
    const double proj = dot(v, *b);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] -= proj * (*b)[i];
  }
}

EmbeddingVector to_embedding(const Vec& v) {
  std::vector<float> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = static_cast<float>(v[i]);
  return EmbeddingVector(std::move(out));
}

struct PoolImage {
  double yaw = 0.0;
  Vec z_image;
};

class World {
 public:
  explicit World(const SyntheticWorldConfig& cfg) : cfg_(cfg) {
    identities_.reserve(cfg.n_identities);
    for (std::size_t i = 0; i < cfg.n_identities; ++i) identities_.push_back(make_identity(cfg, i));
    CounterRng bias_rng(cfg.seed, "bias");
    bias_ = gaussian(bias_rng, cfg.dim);
    normalize(bias_);
  }

  PoolImage image(std::size_t identity, std::size_t index) const {
    CounterRng rng(cfg_.seed, "image", {identity, index});
    PoolImage img;
    const double magnitude = rng.uniform(cfg_.pose_min_deg, cfg_.pose_range_deg);
    const bool negative = cfg_.yaw_signs == YawSigns::Mixed && rng.uniform() < 0.5;
    img.yaw = negative ? -magnitude : magnitude;
    img.z_image = gaussian(rng, cfg_.dim);
    return img;
  }

  /// normalize(u + k_p |yaw| d_side); `mirrored` selects the opposite side.
  Vec clean(std::size_t identity, double yaw, bool mirrored) const {
    const auto& g = identities_[identity];
    const bool right = (yaw >= 0.0) != mirrored;
    const Vec& d = right ? g.d_right : g.d_left;
    const double scale = cfg_.pose_noise_scale * std::abs(yaw);
    Vec v(cfg_.dim);
    for (std::size_t c = 0; c < cfg_.dim; ++c) v[c] = g.prototype[c] + scale * d[c];
    normalize(v);
    return v;
  }

  void add_noise(Vec& v, const Vec& z_image, CounterRng& rep_rng) const {
    const double a = cfg_.obs_noise_scale * std::sqrt(cfg_.noise_image_correlation);
    const double b = cfg_.obs_noise_scale * std::sqrt(1.0 - cfg_.noise_image_correlation);
    for (std::size_t c = 0; c < cfg_.dim; ++c) {
      const double z_rep = rep_rng.normal();
      v[c] += a * z_image[c] + b * z_rep;
    }
  }

  FaceSample real_sample(std::string sample_id, std::size_t identity, std::size_t index) const {
    const PoolImage img = image(identity, index);
    FaceSample s;
    s.sample_id = std::move(sample_id);
    s.identity_id = "id" + std::to_string(identity);
    s.yaw_deg = img.yaw;
    for (Transform t : kRealTransforms) {
      Vec v = clean(identity, img.yaw, t == Transform::Flipped);
      CounterRng rep_rng(cfg_.seed, "rep", {identity, index, static_cast<std::uint64_t>(t)});
      add_noise(v, img.z_image, rep_rng);
      normalize(v);
      s.representations.emplace(t, to_embedding(v));
    }
    return s;
  }

  /// Adds the animator's outputs for pair `pair_index` to the source sample.
  void animate(FaceSample& source, std::size_t identity, std::size_t index, double driving_yaw,
               bool flip, std::size_t pair_index) const {
    const PoolImage img = image(identity, index);
    const bool mirrored_input = flip && cfg_.honor_flip;
    const double src_yaw = mirrored_input ? -img.yaw : img.yaw;
    const double alpha = cfg_.animator_fidelity;
    const double anim_yaw = (1.0 - alpha) * src_yaw + alpha * driving_yaw;

    CounterRng art_rng(cfg_.seed, "artifact", {pair_index});
    Vec artifact = gaussian(art_rng, cfg_.dim);
    normalize(artifact);
    const bool crosses_sides = flip && !cfg_.honor_flip;
    const double penalty = crosses_sides ? cfg_.flip_penalty_scale * cfg_.pose_noise_scale *
                                               std::abs(img.yaw - (-img.yaw))
                                         : 0.0;

    for (Transform t : {Transform::Animated, Transform::AnimatedFlipped}) {
      Vec v = clean(identity, anim_yaw, t == Transform::AnimatedFlipped);
      for (std::size_t c = 0; c < cfg_.dim; ++c) {
        v[c] += cfg_.animator_bias_scale * bias_[c] + penalty * artifact[c];
      }
      CounterRng rep_rng(cfg_.seed, "animate", {pair_index, static_cast<std::uint64_t>(t)});
      add_noise(v, img.z_image, rep_rng);
      normalize(v);
      source.representations.emplace(t, to_embedding(v));
    }
  }

 private:
  const SyntheticWorldConfig& cfg_;
  std::vector<IdentityGeometry> identities_;
  Vec bias_;
};

}  // namespace

std::vector<double> IdentityGeometry::mirror(std::span<const double> v) const {
  std::vector<double> out(v.begin(), v.end());
  const double proj = dot(v, mirror_axis);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= 2.0 * proj * mirror_axis[i];
  return out;
}

IdentityGeometry make_identity(const SyntheticWorldConfig& cfg, std::size_t identity) {
  CounterRng rng(cfg.seed, "identity", {identity});
  IdentityGeometry g;
  g.prototype = gaussian(rng, cfg.dim);
  normalize(g.prototype);
  Vec p = gaussian(rng, cfg.dim);
  orthogonalize(p, {&g.prototype});
  normalize(p);
  Vec q = gaussian(rng, cfg.dim);
  orthogonalize(q, {&g.prototype, &p});
  normalize(q);
  const double r = 1.0 / std::sqrt(2.0);
  g.d_left.resize(cfg.dim);
  g.d_right.resize(cfg.dim);
  for (std::size_t c = 0; c < cfg.dim; ++c) {
    g.d_left[c] = r * (p[c] + q[c]);
    g.d_right[c] = r * (p[c] - q[c]);
  }
  g.mirror_axis = std::move(q);
  return g;
}

Manifest generate_world(const SyntheticWorldConfig& cfg) {
  cfg.validate();
  const World world(cfg);

  const std::size_t n_pairs = cfg.pair_count_same + cfg.pair_count_diff;
  std::vector<bool> labels(n_pairs, false);
  std::fill(labels.begin(), labels.begin() + static_cast<std::ptrdiff_t>(cfg.pair_count_same),
            true);
  CounterRng shuffle(cfg.seed, "shuffle");
  for (std::size_t i = n_pairs; i > 1; --i) {
    const auto j = static_cast<std::size_t>(shuffle.below(i));
    std::swap(labels[i - 1], labels[j]);
  }

  Manifest m;
  m.dim = cfg.dim;
  m.samples.reserve(2 * n_pairs);
  m.pairs.reserve(n_pairs);
  for (const auto& [k, v] : cfg.to_key_values()) m.metadata["world." + k] = v;
  m.metadata["generator"] = "synthworld";

  const std::size_t nid = cfg.n_identities;
  const std::size_t spi = cfg.samples_per_identity;
  for (std::size_t k = 0; k < n_pairs; ++k) {
    CounterRng rng(cfg.seed, "pair", {k});
    const bool same = labels[k];
    const std::size_t i = rng.below(nid);
    const std::size_t j = same ? i : (i + 1 + rng.below(nid - 1)) % nid;
    const std::size_t a = rng.below(spi);
    const std::size_t c = same ? (a + 1 + rng.below(spi - 1)) % spi : rng.below(spi);

    const std::string prefix = "p" + std::to_string(k);
    FaceSample left = world.real_sample(prefix + "a-id" + std::to_string(i) + "-" +
                                            std::to_string(a), i, a);
    FaceSample right = world.real_sample(prefix + "b-id" + std::to_string(j) + "-" +
                                             std::to_string(c), j, c);

    const auto roles =
        selector::select_roles(left.sample_id, left.yaw_deg, right.sample_id, right.yaw_deg);
    const bool left_is_source = roles.source == left.sample_id;
    if (left_is_source) {
      world.animate(left, i, a, right.yaw_deg, roles.flip_source_before_animation, k);
    } else {
      world.animate(right, j, c, left.yaw_deg, roles.flip_source_before_animation, k);
    }

    m.pairs.push_back(PairRecord{left.sample_id, right.sample_id, same});
    m.samples.push_back(std::move(left));
    m.samples.push_back(std::move(right));
  }
  m.reindex();
  return m;
}

protocol::VerificationRun evaluate_manifest(const Manifest& m,
                                            const aggregator::AggregationWeights& weights,
                                            int folds, std::size_t workers) {
  const auto plans = selector::plan_all(m);
  const auto scores = aggregator::score_pairs(m, plans, weights,
                                              aggregator::FallbackPolicy::RealFallback, workers);
  std::vector<protocol::ScoredPair> scored;
  scored.reserve(scores.size());
  std::size_t fallback = 0;
  for (const auto& s : scores) {
    scored.push_back({s.score, s.pair.is_same});
    fallback += s.any_fallback() ? 1 : 0;
  }
  return protocol::evaluate(scored, protocol::assign_folds(scored.size(), folds), fallback,
                            workers);
}

std::vector<aggregator::AggregationWeights> default_weight_grid() {
  return {{0.0, 1.0}, {0.25, 0.75}, {0.5, 0.5}, {0.75, 0.25}, {1.0, 0.0}};
}

double mean(std::span<const double> v) {
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double sample_std(std::span<const double> v) {
  if (v.size() < 2) return 0.0;
  const double mu = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - mu) * (x - mu);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

std::vector<AblationRow> run_ablation(const SyntheticWorldConfig& cfg,
                                      std::span<const aggregator::AggregationWeights> grid,
                                      std::span<const std::uint64_t> seeds, int folds,
                                      std::size_t workers) {
  if (grid.empty()) throw Error(Errc::InvalidConfig, "weight grid is empty");
  if (seeds.empty()) throw Error(Errc::InvalidConfig, "seed list is empty");
  cfg.validate();
  for (const auto& w : grid) w.validate();

  std::vector<std::vector<double>> acc(seeds.size(), std::vector<double>(grid.size()));
  parallel_for(seeds.size(), workers, [&](std::size_t s) {
    SyntheticWorldConfig c = cfg;
    c.seed = seeds[s];
    const Manifest m = generate_world(c);
    for (std::size_t g = 0; g < grid.size(); ++g) {
      acc[s][g] = evaluate_manifest(m, grid[g], folds).mean_accuracy;
    }
  });

  std::vector<AblationRow> rows;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    AblationRow row;
    row.weights = grid[g];
    for (std::size_t s = 0; s < seeds.size(); ++s) row.accuracies.push_back(acc[s][g]);
    row.mean_accuracy = mean(row.accuracies);
    row.std_accuracy = sample_std(row.accuracies);
    rows.push_back(std::move(row));
  }
  return rows;
}

double FlipAblation::mean_with_flip() const { return mean(with_flip); }
double FlipAblation::mean_without_flip() const { return mean(without_flip); }
double FlipAblation::mean_baseline() const { return mean(baseline); }

FlipAblation run_flip_ablation(const SyntheticWorldConfig& cfg,
                               std::span<const std::uint64_t> seeds,
                               const aggregator::AggregationWeights& weights, int folds,
                               std::size_t workers) {
  if (seeds.empty()) throw Error(Errc::InvalidConfig, "seed list is empty");
  cfg.validate();
  weights.validate();

  FlipAblation out;
  out.with_flip.resize(seeds.size());
  out.without_flip.resize(seeds.size());
  out.baseline.resize(seeds.size());
  std::vector<double> opposite(seeds.size());
  const aggregator::AggregationWeights real_only{1.0, 0.0};

  parallel_for(seeds.size(), workers, [&](std::size_t s) {
    SyntheticWorldConfig c = cfg;
    c.seed = seeds[s];
    c.honor_flip = true;
    const Manifest with = generate_world(c);
    c.honor_flip = false;
    const Manifest without = generate_world(c);

    out.with_flip[s] = evaluate_manifest(with, weights, folds).mean_accuracy;
    out.without_flip[s] = evaluate_manifest(without, weights, folds).mean_accuracy;
    out.baseline[s] = evaluate_manifest(with, real_only, folds).mean_accuracy;

    std::size_t opp = 0;
    for (const auto& p : with.pairs) {
      opp += with.find(p.left)->yaw_deg * with.find(p.right)->yaw_deg < 0.0 ? 1 : 0;
    }
    opposite[s] = static_cast<double>(opp) / static_cast<double>(with.pairs.size());
  });
  out.opposite_sign_fraction = mean(opposite);
  return out;
}

}  // namespace posetta::synth
