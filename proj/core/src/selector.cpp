#include "posetta/selector.hpp"

#include <cmath>

#include "posetta/error.hpp"

namespace posetta::selector {

RoleAssignment select_roles(std::string_view id1, double yaw1, std::string_view id2,
                            double yaw2) {
  if (!std::isfinite(yaw1) || !std::isfinite(yaw2)) {
    throw Error(Errc::NonFiniteYaw, "pair (" + std::string(id1) + ", " + std::string(id2) +
                                        ") has a non-finite yaw");
  }
  const bool first_is_source = std::abs(yaw1) <= std::abs(yaw2);
  RoleAssignment roles;
  roles.source = std::string(first_is_source ? id1 : id2);
  roles.driving = std::string(first_is_source ? id2 : id1);
  roles.flip_source_before_animation = yaw1 * yaw2 < 0.0;
  return roles;
}

AugmentationPlan build_plan(const PairRecord& pair, const Manifest& m) {
  const FaceSample* a = m.find(pair.left);
  const FaceSample* b = m.find(pair.right);
  if (a == nullptr || b == nullptr) {
    throw Error(Errc::UnknownSample,
                "unknown sample '" + (a == nullptr ? pair.left : pair.right) + "'");
  }
  AugmentationPlan plan;
  plan.roles = select_roles(a->sample_id, a->yaw_deg, b->sample_id, b->yaw_deg);
  plan.required_reps[plan.roles.source] = {kAllTransforms.begin(), kAllTransforms.end()};
  plan.required_reps[plan.roles.driving] = {kRealTransforms.begin(), kRealTransforms.end()};
  return plan;
}

CoverageReport check_plan_coverage(const AugmentationPlan& plan, const Manifest& m) {
  CoverageReport report;
  for (const auto& [id, tags] : plan.required_reps) {
    const FaceSample* s = m.find(id);
    for (Transform t : tags) {
      if (s == nullptr || !s->has(t)) report.missing.emplace_back(id, t);
    }
  }
  return report;
}

std::vector<Transform> PairPlan::required_for(const std::string& sample_id) const {
  if (plan) {
    auto it = plan->required_reps.find(sample_id);
    if (it != plan->required_reps.end()) return it->second;
    return {};
  }
  return {kRealTransforms.begin(), kRealTransforms.end()};
}

std::vector<PairPlan> plan_all(const Manifest& m) {
  std::vector<PairPlan> plans;
  plans.reserve(m.pairs.size());
  for (std::size_t i = 0; i < m.pairs.size(); ++i) {
    PairPlan entry{i, m.pairs[i], std::nullopt};
    try {
      entry.plan = build_plan(m.pairs[i], m);
    } catch (const Error& e) {
      if (e.code() != Errc::NonFiniteYaw) throw;
    }
    plans.push_back(std::move(entry));
  }
  return plans;
}

CoverageReport check_coverage(const std::vector<PairPlan>& plans, const Manifest& m) {
  CoverageReport report;
  for (const auto& p : plans) {
    for (const auto* id : {&p.pair.left, &p.pair.right}) {
      const FaceSample* s = m.find(*id);
      for (Transform t : p.required_for(*id)) {
        if (s == nullptr || !s->has(t)) report.missing.emplace_back(*id, t);
      }
    }
  }
  return report;
}

}  // namespace posetta::selector
