#include "posetta/aggregator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "posetta/error.hpp"

namespace posetta::aggregator {

namespace {

AggregatedFeature finish(std::vector<double> sum, int rep_count) {
  double sq = 0.0;
  for (double v : sum) sq += v * v;
  const double norm = std::sqrt(sq);
  if (!(norm >= kDegenerateNorm)) {
    throw Error(Errc::DegenerateSum, "aggregate norm " + std::to_string(norm) + " below 1e-9");
  }
  for (double& v : sum) v /= norm;
  return AggregatedFeature{std::move(sum), rep_count, false};
}

}  // namespace

void AggregationWeights::validate() const {
  const auto ok = [](double w) { return std::isfinite(w) && w >= 0.0; };
  if (!ok(w_real) || !ok(w_syn)) {
    throw Error(Errc::InvalidWeights, "weights must be finite and non-negative");
  }
  if (!(w_real + w_syn > 0.0)) throw Error(Errc::InvalidWeights, "w_real + w_syn must be > 0");
}

AggregatedFeature aggregate_plain(std::span<const EmbeddingVector> reps) {
  if (reps.empty()) throw Error(Errc::EmptyRepSet, "no representations to aggregate");
  const std::size_t dim = reps.front().dim();
  std::vector<double> sum(dim, 0.0);
  const double scale = 1.0 / static_cast<double>(reps.size());
  for (const auto& r : reps) {
    if (r.dim() != dim) throw Error(Errc::DimMismatch, "representation dims differ");
    const auto v = r.values();
    for (std::size_t c = 0; c < dim; ++c) sum[c] += scale * static_cast<double>(v[c]);
  }
  return finish(std::move(sum), static_cast<int>(reps.size()));
}

AggregatedFeature aggregate_weighted(std::span<const TaggedRep> reps,
                                     const AggregationWeights& weights) {
  if (reps.empty()) throw Error(Errc::EmptyRepSet, "no representations to aggregate");
  weights.validate();
  const std::size_t dim = reps.front().values.size();
  if (dim == 0) throw Error(Errc::DimMismatch, "empty representation");

  bool any_weight = false;
  for (const auto& r : reps) {
    if (r.values.size() != dim) throw Error(Errc::DimMismatch, "representation dims differ");
    if (!r.tag.consistent()) throw Error(Errc::SchemaViolation, "inconsistent provenance tag");
    any_weight = any_weight || weights.for_provenance(r.tag.provenance) > 0.0;
  }
  if (!any_weight) {
    throw Error(Errc::AllZeroWeight, "every provided representation has zero weight");
  }

  const double inv_count = 1.0 / static_cast<double>(reps.size());
  std::vector<double> sum(dim, 0.0);
  for (const auto& r : reps) {
    const double w = weights.for_provenance(r.tag.provenance) * inv_count;
    if (w == 0.0) continue;
    for (std::size_t c = 0; c < dim; ++c) sum[c] += w * static_cast<double>(r.values[c]);
  }
  return finish(std::move(sum), static_cast<int>(reps.size()));
}

std::string_view to_string(FallbackPolicy p) noexcept {
  return p == FallbackPolicy::Strict ? "strict" : "real-fallback";
}

FallbackPolicy parse_policy(std::string_view name) {
  if (name == "strict") return FallbackPolicy::Strict;
  if (name == "real-fallback") return FallbackPolicy::RealFallback;
  throw Error(Errc::InvalidConfig, "unknown fallback policy '" + std::string(name) + "'");
}

AggregatedFeature aggregate_for_sample(const FaceSample& sample,
                                       std::span<const Transform> required,
                                       const AggregationWeights& weights,
                                       FallbackPolicy policy) {
  if (required.empty()) throw Error(Errc::EmptyRepSet, "no representations required");
  if (!sample.has(Transform::Original)) {
    throw Error(Errc::MissingRepresentation,
                "sample '" + sample.sample_id + "' lacks the original representation");
  }

  bool fallback = false;
  for (Transform t : required) {
    if (sample.has(t)) continue;
    if (policy == FallbackPolicy::RealFallback && provenance_of(t) == Provenance::Synthetic) {
      fallback = true;
      continue;
    }
    throw Error(Errc::MissingRepresentation,
                "sample '" + sample.sample_id + "' lacks " + std::string(to_string(t)));
  }

  std::vector<TaggedRep> reps;
  reps.reserve(required.size());
  for (Transform t : required) {
    if (fallback && provenance_of(t) == Provenance::Synthetic) continue;
    reps.push_back({RepresentationTag::of(t), sample.find(t)->values()});
  }
  if (fallback) {
    for (Transform t : kRealTransforms) {
      const bool listed = std::find(required.begin(), required.end(), t) != required.end();
      if (listed) continue;
      const EmbeddingVector* v = sample.find(t);
      if (v == nullptr) {
        throw Error(Errc::MissingRepresentation,
                    "sample '" + sample.sample_id + "' lacks " + std::string(to_string(t)));
      }
      reps.push_back({RepresentationTag::of(t), v->values()});
    }
  }

  // single provenance (driving side, fallback): equal weights
  weights.validate();
  const bool mixed = std::any_of(reps.begin(), reps.end(), [&](const TaggedRep& r) {
    return r.tag.provenance != reps.front().tag.provenance;
  });
  AggregatedFeature out = aggregate_weighted(reps, mixed ? weights : AggregationWeights{1.0, 1.0});
  out.fallback_used = fallback;
  return out;
}

double cosine_similarity(const AggregatedFeature& a, const AggregatedFeature& b) {
  if (a.vector.size() != b.vector.size()) {
    throw Error(Errc::DimMismatch, "feature dims differ");
  }
  double dot = 0.0;
  for (std::size_t c = 0; c < a.vector.size(); ++c) dot += a.vector[c] * b.vector[c];
  return std::clamp(dot, -1.0, 1.0);
}

}  // namespace posetta::aggregator
