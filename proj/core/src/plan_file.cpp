#include "posetta/plan_file.hpp"

#include "json_lines.hpp"
#include "posetta/error.hpp"
#include "run_header_json.hpp"

namespace posetta::selector {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json tags_json(const std::vector<Transform>& tags) {
  ordered_json arr = ordered_json::array();
  for (Transform t : tags) arr.push_back(to_string(t));
  return arr;
}

}  // namespace

std::string format_plan_file(const PlanFile& file) {
  std::string out = header_to_json(file.header).dump() + '\n';
  for (const auto& p : file.plans) {
    ordered_json line;
    line["pair_index"] = p.pair_index;
    line["left"] = p.pair.left;
    line["right"] = p.pair.right;
    line["same"] = p.pair.is_same;
    if (p.plan) {
      line["source"] = p.plan->roles.source;
      line["driving"] = p.plan->roles.driving;
      line["flip_source_before_animation"] = p.plan->roles.flip_source_before_animation;
    } else {
      line["source"] = nullptr;
      line["driving"] = nullptr;
      line["flip_source_before_animation"] = false;
    }
    line["baseline_only"] = p.baseline_only();
    line["required"] = ordered_json::object();
    for (const auto* id : {&p.pair.left, &p.pair.right}) {
      line["required"][*id] = tags_json(p.required_for(*id));
    }
    out += line.dump() + '\n';
  }
  return out;
}

PlanFile parse_plan_file(const std::string& text) {
  PlanFile file;
  bool have_header = false;
  for (const auto& obj : detail::parse_lines(text, "plan")) {
    try {
      if (obj.contains("kind")) {
        file.header = header_from_json(obj);
        have_header = true;
        continue;
      }
      PairPlan p;
      p.pair_index = obj.at("pair_index").get<std::size_t>();
      p.pair.left = obj.at("left").get<std::string>();
      p.pair.right = obj.at("right").get<std::string>();
      p.pair.is_same = obj.at("same").get<bool>();
      if (!obj.at("baseline_only").get<bool>()) {
        AugmentationPlan plan;
        plan.roles.source = obj.at("source").get<std::string>();
        plan.roles.driving = obj.at("driving").get<std::string>();
        plan.roles.flip_source_before_animation =
            obj.at("flip_source_before_animation").get<bool>();
        for (const auto& [id, tags] : obj.at("required").items()) {
          auto& dst = plan.required_reps[id];
          for (const auto& t : tags) dst.push_back(parse_transform(t.get<std::string>()));
        }
        const bool roles_ok =
            (plan.roles.source == p.pair.left && plan.roles.driving == p.pair.right) ||
            (plan.roles.source == p.pair.right && plan.roles.driving == p.pair.left);
        if (!roles_ok || plan.required_reps.size() != 2 ||
            plan.required_reps[plan.roles.source].size() != 4 ||
            plan.required_reps[plan.roles.driving].size() != 2) {
          throw Error(Errc::SchemaViolation,
                      "plan for pair " + std::to_string(p.pair_index) + " is malformed");
        }
        p.plan = std::move(plan);
      }
      file.plans.push_back(std::move(p));
    } catch (const nlohmann::json::exception& e) {
      throw Error(Errc::SchemaViolation, std::string("plan entry: ") + e.what());
    }
  }
  if (!have_header) throw Error(Errc::SchemaViolation, "plan file has no header line");
  return file;
}

void write_plan_file(const PlanFile& file, const std::filesystem::path& path) {
  detail::write_text(path, format_plan_file(file));
}

PlanFile read_plan_file(const std::filesystem::path& path) {
  return parse_plan_file(detail::read_text(path));
}

void check_plans_match(const std::vector<PairPlan>& plans, const Manifest& m) {
  if (plans.size() != m.pairs.size()) {
    throw Error(Errc::ProtocolMismatch, "plan has " + std::to_string(plans.size()) +
                                            " pairs, manifest has " +
                                            std::to_string(m.pairs.size()));
  }
  for (std::size_t i = 0; i < plans.size(); ++i) {
    if (plans[i].pair_index != i || !(plans[i].pair == m.pairs[i])) {
      throw Error(Errc::ProtocolMismatch,
                  "plan entry " + std::to_string(i) + " does not match manifest pair");
    }
  }
}

}  // namespace posetta::selector
