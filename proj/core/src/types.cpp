#include "posetta/types.hpp"

#include <cmath>
#include <string>

#include "posetta/error.hpp"

namespace posetta {

EmbeddingVector::EmbeddingVector(std::vector<float> values) : values_(std::move(values)) {
  if (values_.empty()) throw Error(Errc::DimMismatch, "embedding must have dim >= 1");
}

double EmbeddingVector::norm() const noexcept {
  double acc = 0.0;
  for (float v : values_) acc += static_cast<double>(v) * static_cast<double>(v);
  return std::sqrt(acc);
}

std::string_view to_string(Transform t) noexcept {
  switch (t) {
    case Transform::Original: return "original";
    case Transform::Flipped: return "flipped";
    case Transform::Animated: return "animated";
    case Transform::AnimatedFlipped: return "animated_flipped";
  }
  return "?";
}

std::string_view to_string(Provenance p) noexcept {
  return p == Provenance::Real ? "real" : "synthetic";
}

Transform parse_transform(std::string_view name) {
  for (Transform t : kAllTransforms) {
    if (to_string(t) == name) return t;
  }
  throw Error(Errc::UnknownTag, "unknown transform '" + std::string(name) + "'");
}

Provenance parse_provenance(std::string_view name) {
  if (name == "real") return Provenance::Real;
  if (name == "synthetic") return Provenance::Synthetic;
  throw Error(Errc::UnknownTag, "unknown provenance '" + std::string(name) + "'");
}

const EmbeddingVector* FaceSample::find(Transform t) const {
  auto it = representations.find(t);
  return it == representations.end() ? nullptr : &it->second;
}

void Manifest::reindex() {
  by_id_.clear();
  by_id_.reserve(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!by_id_.emplace(samples[i].sample_id, i).second) {
      throw Error(Errc::SchemaViolation, "duplicate sample_id '" + samples[i].sample_id + "'");
    }
  }
}

const FaceSample* Manifest::find(std::string_view sample_id) const {
  auto it = by_id_.find(std::string(sample_id));
  return it == by_id_.end() ? nullptr : &samples[it->second];
}

std::size_t Manifest::vector_count() const {
  std::size_t n = 0;
  for (const auto& s : samples) n += s.representations.size();
  return n;
}

void validate(const Manifest& m) {
  if (m.dim == 0) throw Error(Errc::DimMismatch, "manifest dim must be >= 1");
  std::unordered_map<std::string_view, const FaceSample*> ids;
  ids.reserve(m.samples.size());
  for (const auto& s : m.samples) {
    if (s.sample_id.empty()) throw Error(Errc::SchemaViolation, "empty sample_id");
    if (!ids.emplace(s.sample_id, &s).second) {
      throw Error(Errc::SchemaViolation, "duplicate sample_id '" + s.sample_id + "'");
    }
    if (!std::isnan(s.yaw_deg) && !(s.yaw_deg >= -180.0 && s.yaw_deg <= 180.0)) {
      throw Error(Errc::SchemaViolation,
                  "sample '" + s.sample_id + "' yaw_deg outside [-180, 180]");
    }
    if (!s.has(Transform::Original)) {
      throw Error(Errc::SchemaViolation,
                  "sample '" + s.sample_id + "' lacks the original representation");
    }
    for (const auto& [t, v] : s.representations) {
      if (v.dim() != m.dim) {
        throw Error(Errc::DimMismatch, "sample '" + s.sample_id + "' " +
                                           std::string(to_string(t)) + " has dim " +
                                           std::to_string(v.dim()) + ", manifest dim " +
                                           std::to_string(m.dim));
      }
    }
  }
  for (const auto& p : m.pairs) {
    if (p.left == p.right) {
      throw Error(Errc::SchemaViolation, "pair references '" + p.left + "' twice");
    }
    for (const auto* id : {&p.left, &p.right}) {
      if (!ids.contains(*id)) {
        throw Error(Errc::DanglingPairRef, "pair references unknown sample '" + *id + "'");
      }
    }
  }
}

}  // namespace posetta
