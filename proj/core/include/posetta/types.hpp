#pragma once

// Domain types shared by every module: embeddings, representation tags,
// face samples, verification pairs and the manifest that bundles them.

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace posetta {

/// One embedding-network output, stored as 32-bit floats like the blob.
class EmbeddingVector {
 public:
  EmbeddingVector() = default;
  explicit EmbeddingVector(std::vector<float> values);

  std::size_t dim() const noexcept { return values_.size(); }
  std::span<const float> values() const noexcept { return values_; }
  std::span<float> values() noexcept { return values_; }

  /// L2 norm accumulated in double precision.
  double norm() const noexcept;

  friend bool operator==(const EmbeddingVector&, const EmbeddingVector&) = default;

 private:
  std::vector<float> values_;
};

enum class Transform { Original = 0, Flipped = 1, Animated = 2, AnimatedFlipped = 3 };
enum class Provenance { Real, Synthetic };

inline constexpr std::array<Transform, 4> kAllTransforms = {
    Transform::Original, Transform::Flipped, Transform::Animated, Transform::AnimatedFlipped};
inline constexpr std::array<Transform, 2> kRealTransforms = {Transform::Original,
                                                             Transform::Flipped};

/// Animated outputs come from the portrait animator and are synthetic;
/// the original image and its mirror are real.
constexpr Provenance provenance_of(Transform t) noexcept {
  return (t == Transform::Animated || t == Transform::AnimatedFlipped) ? Provenance::Synthetic
                                                                        : Provenance::Real;
}

struct RepresentationTag {
  Transform transform = Transform::Original;
  Provenance provenance = Provenance::Real;

  static constexpr RepresentationTag of(Transform t) noexcept { return {t, provenance_of(t)}; }
  constexpr bool consistent() const noexcept { return provenance == provenance_of(transform); }

  friend constexpr bool operator==(const RepresentationTag&, const RepresentationTag&) = default;
};

std::string_view to_string(Transform t) noexcept;
std::string_view to_string(Provenance p) noexcept;
/// Throws Error{UnknownTag} for anything outside the four known names.
Transform parse_transform(std::string_view name);
Provenance parse_provenance(std::string_view name);

struct FaceSample {
  std::string sample_id;
  std::string identity_id;
  /// Signed yaw in degrees. NaN marks a failed pose estimate.
  double yaw_deg = 0.0;
  std::map<Transform, EmbeddingVector> representations;

  bool has(Transform t) const { return representations.contains(t); }
  const EmbeddingVector* find(Transform t) const;
};

struct PairRecord {
  std::string left;
  std::string right;
  bool is_same = false;

  friend bool operator==(const PairRecord&, const PairRecord&) = default;
};

struct Manifest {
  std::size_t dim = 0;
  std::vector<FaceSample> samples;
  std::vector<PairRecord> pairs;
  std::map<std::string, std::string> metadata;

  /// Rebuilds the sample_id lookup; call after mutating `samples`.
  void reindex();
  const FaceSample* find(std::string_view sample_id) const;
  std::size_t vector_count() const;

 private:
  std::unordered_map<std::string, std::size_t> by_id_;
};

/// Checks every Manifest invariant; throws the specific Error on the first
/// violation. Does not check norms.
void validate(const Manifest& m);

}  // namespace posetta
