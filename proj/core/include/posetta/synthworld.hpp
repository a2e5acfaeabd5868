#pragma once

// Synthetic embedding world with a known construction.
//
// Each identity has a unit prototype u and two unit side-distortion
// directions d_left and d_right = mirror(d_left), both orthogonal to u. A
// real image at yaw y embeds as
//
//   normalize(normalize(u + k_p |y| d_side(y)) + noise)
//
// and its mirror uses the other side. An animated source rendered at the
// animated yaw y_a = (1 - alpha) y_src' + alpha y_driving embeds as
//
//   normalize(normalize(u + k_p |y_a| d_side(y_a)) + k_b b + noise + penalty)
//
// where b is one world-wide bias direction, y_src' is the (optionally
// mirrored) source yaw, and penalty is a random artifact direction of
// length flip_penalty_scale * k_p * 2 |y_src| applied only when the source
// crosses sides with the flip hint ignored. Noise is
// sigma * (sqrt(rho) z_image + sqrt(1 - rho) z_rep): z_image is shared by
// every representation of one image, z_rep is fresh per representation.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "posetta/aggregator.hpp"
#include "posetta/protocol.hpp"
#include "posetta/types.hpp"

namespace posetta::synth {

enum class YawSigns { Mixed, Positive };

struct SyntheticWorldConfig {
  std::size_t n_identities = 200;
  std::size_t samples_per_identity = 6;
  std::size_t dim = 64;
  std::uint64_t seed = 0;
  double pose_range_deg = 90.0;
  double pose_min_deg = 0.0;
  double pose_noise_scale = 0.02;        // k_p, per degree of |yaw|
  double animator_fidelity = 0.8;        // alpha
  double animator_bias_scale = 0.7;      // k_b
  double obs_noise_scale = 0.15;         // sigma, per channel
  double noise_image_correlation = 0.7;  // rho
  double flip_penalty_scale = 2.0;
  std::size_t pair_count_same = 3000;
  std::size_t pair_count_diff = 3000;
  YawSigns yaw_signs = YawSigns::Mixed;
  bool honor_flip = true;

  /// Throws InvalidConfig.
  void validate() const;
  /// Resolved key=value view in a fixed order, for config echo.
  std::vector<std::pair<std::string, std::string>> to_key_values() const;
  /// Applies one "key=value" assignment; throws InvalidConfig.
  void apply(std::string_view key, std::string_view value);
};

/// Parses a plain-text config: one `key = value` per line, '#' comments.
SyntheticWorldConfig parse_world_config(const std::string& text,
                                        SyntheticWorldConfig base = {});
SyntheticWorldConfig load_world_config(const std::filesystem::path& path);
/// Applies "key=value" overrides in order.
void apply_overrides(SyntheticWorldConfig& cfg, std::span<const std::string> overrides);

/// Identity-level geometry, exposed for tests.
struct IdentityGeometry {
  std::vector<double> prototype;
  std::vector<double> d_left;
  std::vector<double> d_right;
  std::vector<double> mirror_axis;

  /// Reflection across the mirror axis; maps d_left <-> d_right, fixes u.
  std::vector<double> mirror(std::span<const double> v) const;
};

IdentityGeometry make_identity(const SyntheticWorldConfig& cfg, std::size_t identity);

Manifest generate_world(const SyntheticWorldConfig& cfg);

/// Plan, aggregate and evaluate one manifest with the given weights.
protocol::VerificationRun evaluate_manifest(const Manifest& m,
                                            const aggregator::AggregationWeights& weights,
                                            int folds = 10, std::size_t workers = 1);

/// Weight grid matching the rows of a w_real sweep 0, 0.25, ..., 1.
std::vector<aggregator::AggregationWeights> default_weight_grid();

struct AblationRow {
  aggregator::AggregationWeights weights;
  std::vector<double> accuracies;  // one per seed
  double mean_accuracy = 0.0;
  double std_accuracy = 0.0;       // sample standard deviation
};

std::vector<AblationRow> run_ablation(const SyntheticWorldConfig& cfg,
                                      std::span<const aggregator::AggregationWeights> grid,
                                      std::span<const std::uint64_t> seeds, int folds = 10,
                                      std::size_t workers = 1);

struct FlipAblation {
  std::vector<double> with_flip;
  std::vector<double> without_flip;
  std::vector<double> baseline;  // real representations only, no TTA
  double opposite_sign_fraction = 0.0;

  double mean_with_flip() const;
  double mean_without_flip() const;
  double mean_baseline() const;
};

FlipAblation run_flip_ablation(const SyntheticWorldConfig& cfg,
                               std::span<const std::uint64_t> seeds,
                               const aggregator::AggregationWeights& weights = {},
                               int folds = 10, std::size_t workers = 1);

double mean(std::span<const double> v);
double sample_std(std::span<const double> v);

}  // namespace posetta::synth
