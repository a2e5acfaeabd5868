#pragma once

// Test-time feature aggregation and pair scoring.
//
// Plain TTA averages the embeddings of every representation. Weighted TTA
// scales each embedding by w_real or w_syn depending on whether the
// representation came from a real image or from the portrait animator,
// divides by the representation count, and normalizes the result to unit
// L2 norm across channels.

#include <span>
#include <string_view>
#include <vector>

#include "posetta/types.hpp"

namespace posetta::aggregator {

struct AggregationWeights {
  double w_real = 0.75;
  double w_syn = 0.25;

  /// Throws InvalidWeights for negative/non-finite values or a zero sum.
  void validate() const;
  double for_provenance(Provenance p) const noexcept {
    return p == Provenance::Synthetic ? w_syn : w_real;
  }

  friend bool operator==(const AggregationWeights&, const AggregationWeights&) = default;
};

struct AggregatedFeature {
  std::vector<double> vector;
  int rep_count = 0;
  bool fallback_used = false;
};

/// Pre-normalization sums below this norm are rejected as degenerate.
inline constexpr double kDegenerateNorm = 1e-9;

struct TaggedRep {
  RepresentationTag tag;
  std::span<const float> values;
};

AggregatedFeature aggregate_plain(std::span<const EmbeddingVector> reps);
AggregatedFeature aggregate_weighted(std::span<const TaggedRep> reps,
                                     const AggregationWeights& weights);

enum class FallbackPolicy { Strict, RealFallback };

std::string_view to_string(FallbackPolicy p) noexcept;
FallbackPolicy parse_policy(std::string_view name);

/// Aggregates the `required` representations of one sample. Under
/// RealFallback a missing synthetic representation drops the sample to
/// {Original, Flipped} and sets fallback_used; Strict throws
/// MissingRepresentation instead. Missing real representations always throw.
/// A set holding a single provenance class is averaged with equal weights.
AggregatedFeature aggregate_for_sample(const FaceSample& sample,
                                       std::span<const Transform> required,
                                       const AggregationWeights& weights,
                                       FallbackPolicy policy);

/// Dot product of two unit features, clamped to [-1, 1].
double cosine_similarity(const AggregatedFeature& a, const AggregatedFeature& b);

}  // namespace posetta::aggregator
