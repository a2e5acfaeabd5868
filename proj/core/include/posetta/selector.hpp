#pragma once

// Face selection: which image of a pair keeps its identity (source) and
// which supplies the head pose (driving), whether the source is mirrored
// before animation, and which representations each side must provide.

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "posetta/types.hpp"

namespace posetta::selector {

struct RoleAssignment {
  std::string source;
  std::string driving;
  bool flip_source_before_animation = false;

  friend bool operator==(const RoleAssignment&, const RoleAssignment&) = default;
};

struct AugmentationPlan {
  RoleAssignment roles;
  std::map<std::string, std::vector<Transform>> required_reps;

  friend bool operator==(const AugmentationPlan&, const AugmentationPlan&) = default;
};

/// The smaller |yaw| becomes the source; ties go to the first image. The
/// flip flag is set only when the yaw product is strictly negative.
RoleAssignment select_roles(std::string_view id1, double yaw1, std::string_view id2, double yaw2);

/// Throws UnknownSample for a missing id and NonFiniteYaw for a failed
/// pose estimate.
AugmentationPlan build_plan(const PairRecord& pair, const Manifest& m);

struct CoverageReport {
  std::vector<std::pair<std::string, Transform>> missing;
  bool complete() const noexcept { return missing.empty(); }
};

CoverageReport check_plan_coverage(const AugmentationPlan& plan, const Manifest& m);

/// One line of a plan file. `plan` is empty when selection failed on a
/// non-finite yaw; such pairs are scored on real representations only.
struct PairPlan {
  std::size_t pair_index = 0;
  PairRecord pair;
  std::optional<AugmentationPlan> plan;

  /// Required transforms for one side of the pair.
  std::vector<Transform> required_for(const std::string& sample_id) const;
  bool baseline_only() const noexcept { return !plan.has_value(); }
};

/// Plans every manifest pair in order.
std::vector<PairPlan> plan_all(const Manifest& m);

/// Coverage over a full plan list, including the real pair of baseline-only
/// entries.
CoverageReport check_coverage(const std::vector<PairPlan>& plans, const Manifest& m);

}  // namespace posetta::selector
