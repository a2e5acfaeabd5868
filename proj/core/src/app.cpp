#include "posetta/app.hpp"

#include <charconv>
#include <cstdio>

#include "json.hpp"
#include "json_lines.hpp"
#include "posetta/digest.hpp"
#include "posetta/error.hpp"
#include "posetta/manifest.hpp"
#include "posetta/plan_file.hpp"
#include "posetta/report.hpp"
#include "posetta/scores.hpp"
#include "posetta/synthworld.hpp"
#include "run_header_json.hpp"

namespace posetta::app {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

std::string fmt(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

std::string join_seeds(const std::vector<std::uint64_t>& seeds) {
  std::string out;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(seeds[i]);
  }
  return out;
}

void add_manifest_digests(RunHeader& h, const fs::path& manifest) {
  h.set_input("manifest", manifest.generic_string());
  h.set_input("manifest_index_sha256", sha256_file(manifest));
  h.set_input("manifest_blob_sha256", sha256_file(blob_path_for(manifest)));
}

std::string dataset_name(const RunConfig& cfg, const Manifest& m) {
  if (!cfg.dataset.empty()) return cfg.dataset;
  if (auto it = m.metadata.find("dataset"); it != m.metadata.end()) return it->second;
  return cfg.manifest.stem().string();
}

selector::PlanFile make_plan(const RunConfig& cfg, const Manifest& m) {
  selector::PlanFile file;
  file.header.kind = "plan";
  file.header.set_config("command", "plan");
  add_manifest_digests(file.header, cfg.manifest);
  file.plans = selector::plan_all(m);
  return file;
}

aggregator::ScoreFile make_scores(const RunConfig& cfg, const Manifest& m,
                                  const selector::PlanFile& plan,
                                  const std::string& plan_digest) {
  selector::check_plans_match(plan.plans, m);
  const auto coverage = selector::check_coverage(plan.plans, m);
  if (!coverage.complete() && cfg.policy == aggregator::FallbackPolicy::Strict) {
    const auto& [id, t] = coverage.missing.front();
    throw Error(Errc::MissingRepresentation,
                std::to_string(coverage.missing.size()) + " required representation(s) missing, first: " +
                    id + " " + std::string(to_string(t)));
  }

  aggregator::ScoreFile file;
  file.header.kind = "scores";
  file.header.set_config("command", "aggregate");
  file.header.set_config("w_real", fmt(cfg.weights.w_real));
  file.header.set_config("w_syn", fmt(cfg.weights.w_syn));
  file.header.set_config("policy", std::string(aggregator::to_string(cfg.policy)));
  add_manifest_digests(file.header, cfg.manifest);
  file.header.set_input("plan_sha256", plan_digest);
  file.header.set_input("missing_representations", std::to_string(coverage.missing.size()));
  file.scores = aggregator::score_pairs(m, plan.plans, cfg.weights, cfg.policy, cfg.workers);
  return file;
}

report::VerificationReport make_report(const RunConfig& cfg, const Manifest& m,
                                       const aggregator::ScoreFile& scores,
                                       const std::string& scores_digest) {
  aggregator::check_scores_match(scores.scores, m);
  std::vector<protocol::ScoredPair> scored;
  scored.reserve(scores.scores.size());
  std::size_t fallback = 0;
  for (const auto& s : scores.scores) {
    scored.push_back({s.score, s.pair.is_same});
    fallback += s.any_fallback() ? 1 : 0;
  }
  const auto folds = protocol::assign_folds(scored.size(), cfg.folds);

  report::VerificationReport r;
  r.header.kind = "verification_report";
  r.header.set_config("command", "verify");
  r.header.set_config("folds", std::to_string(cfg.folds));
  r.header.set_config("threshold_grid", "-1:5e-4:1");
  for (const auto& [k, v] : scores.header.config) {
    if (k != "command") r.header.set_config("scores." + k, v);
  }
  add_manifest_digests(r.header, cfg.manifest);
  r.header.set_input("scores_sha256", scores_digest);
  r.dataset = dataset_name(cfg, m);
  r.run = protocol::evaluate(scored, folds, fallback, cfg.workers);
  return r;
}

void require_path(const fs::path& p, const char* flag) {
  if (p.empty()) throw Error(Errc::InvalidConfig, std::string("missing required option ") + flag);
}

synth::SyntheticWorldConfig world_config(const RunConfig& cfg) {
  synth::SyntheticWorldConfig w;
  if (!cfg.world_config.empty()) w = synth::load_world_config(cfg.world_config);
  synth::apply_overrides(w, cfg.world_overrides);
  w.validate();
  return w;
}

std::vector<std::uint64_t> seeds_or_default(const RunConfig& cfg) {
  if (!cfg.seeds.empty()) return cfg.seeds;
  return parse_seed_list("0-19");
}

ordered_json world_echo(const synth::SyntheticWorldConfig& w) {
  ordered_json j = ordered_json::object();
  for (const auto& [k, v] : w.to_key_values()) j[k] = v;
  return j;
}

void emit(const RunConfig& cfg, std::ostream& out, const std::string& json,
          const std::string& text) {
  if (!cfg.out.empty()) {
    detail::write_text(cfg.out, json);
    fs::path txt = cfg.out;
    txt.replace_extension(".txt");
    detail::write_text(txt, text);
  }
  out << text;
}

void cmd_plan(const RunConfig& cfg, std::ostream& out) {
  require_path(cfg.manifest, "--manifest");
  require_path(cfg.out, "--out");
  const Manifest m = load_manifest(cfg.manifest);
  const auto file = make_plan(cfg, m);
  selector::write_plan_file(file, cfg.out);
  std::size_t baseline_only = 0;
  for (const auto& p : file.plans) baseline_only += p.baseline_only() ? 1 : 0;
  out << "planned " << file.plans.size() << " pairs (" << baseline_only
      << " baseline-only) -> " << cfg.out.string() << '\n';
}

void cmd_aggregate(const RunConfig& cfg, std::ostream& out) {
  require_path(cfg.manifest, "--manifest");
  require_path(cfg.plan, "--plan");
  require_path(cfg.out, "--out");
  const Manifest m = load_manifest(cfg.manifest);
  const auto plan = selector::read_plan_file(cfg.plan);
  const auto file = make_scores(cfg, m, plan, sha256_file(cfg.plan));
  aggregator::write_score_file(file, cfg.out);
  std::size_t fallback = 0;
  for (const auto& s : file.scores) fallback += s.any_fallback() ? 1 : 0;
  out << "scored " << file.scores.size() << " pairs (" << fallback << " with fallback) -> "
      << cfg.out.string() << '\n';
}

void cmd_verify(const RunConfig& cfg, std::ostream& out) {
  require_path(cfg.manifest, "--manifest");
  require_path(cfg.scores, "--scores");
  const Manifest m = load_manifest(cfg.manifest);
  const auto scores = aggregator::read_score_file(cfg.scores);
  const auto r = make_report(cfg, m, scores, sha256_file(cfg.scores));
  emit(cfg, out, report::format_report_json(r), report::format_report_text(r));
}

void cmd_compare(const RunConfig& cfg, std::ostream& out) {
  if (cfg.reference_reports.empty() ||
      cfg.reference_reports.size() != cfg.candidate_reports.size()) {
    throw Error(Errc::InvalidConfig,
                "compare needs matching numbers of --reference and --candidate reports");
  }
  std::vector<report::ComparisonEntry> entries;
  ordered_json j;
  j["kind"] = "comparison";
  j["reference_label"] = cfg.reference_label;
  j["candidate_label"] = cfg.candidate_label;
  j["datasets"] = ordered_json::array();
  for (std::size_t i = 0; i < cfg.reference_reports.size(); ++i) {
    const auto ref = report::read_report(cfg.reference_reports[i]);
    const auto cand = report::read_report(cfg.candidate_reports[i]);
    const auto delta = protocol::compare_runs(cand.run, ref.run);
    const std::string name = cand.dataset.empty() ? ref.dataset : cand.dataset;
    entries.push_back({name, ref.run, cand.run});
    ordered_json d;
    d["dataset"] = name;
    d["reference_sha256"] = sha256_file(cfg.reference_reports[i]);
    d["candidate_sha256"] = sha256_file(cfg.candidate_reports[i]);
    d["reference_mean_accuracy"] = ref.run.mean_accuracy;
    d["candidate_mean_accuracy"] = cand.run.mean_accuracy;
    d["mean_delta_pp"] = delta.mean_delta_pp;
    d["fold_delta_pp"] = delta.fold_delta_pp;
    j["datasets"].push_back(std::move(d));
  }
  emit(cfg, out, j.dump(2) + '\n',
       report::format_comparison(entries, cfg.reference_label, cfg.candidate_label));
}

void cmd_simulate(const RunConfig& cfg, std::ostream& out) {
  require_path(cfg.out, "--out");
  auto w = world_config(cfg);
  if (!cfg.seeds.empty()) w.seed = cfg.seeds.front();
  Manifest m = synth::generate_world(w);
  if (!cfg.dataset.empty()) m.metadata["dataset"] = cfg.dataset;
  save_manifest(m, cfg.out);
  out << "wrote " << m.samples.size() << " samples, " << m.pairs.size() << " pairs (dim "
      << m.dim << ", seed " << w.seed << ") -> " << cfg.out.string() << '\n';
}

void cmd_ablate_weights(const RunConfig& cfg, std::ostream& out) {
  const auto w = world_config(cfg);
  const auto seeds = seeds_or_default(cfg);
  const auto grid = synth::default_weight_grid();
  const auto rows = synth::run_ablation(w, grid, seeds, cfg.folds, cfg.workers);

  ordered_json j;
  j["kind"] = "weight_ablation";
  j["config"] = world_echo(w);
  j["config"]["seeds"] = join_seeds(seeds);
  j["config"]["folds"] = std::to_string(cfg.folds);
  j["rows"] = ordered_json::array();
  std::vector<std::vector<std::string>> table{{"w_real", "w_syn", "Accuracy (%)", "Std (pp)"}};
  for (const auto& r : rows) {
    ordered_json row;
    row["w_real"] = r.weights.w_real;
    row["w_syn"] = r.weights.w_syn;
    row["mean_accuracy"] = r.mean_accuracy;
    row["std_accuracy"] = r.std_accuracy;
    row["accuracies"] = r.accuracies;
    j["rows"].push_back(std::move(row));
    char wr[16], ws[16], sd[16];
    std::snprintf(wr, sizeof(wr), "%.2f", r.weights.w_real);
    std::snprintf(ws, sizeof(ws), "%.2f", r.weights.w_syn);
    std::snprintf(sd, sizeof(sd), "%.2f", 100.0 * r.std_accuracy);
    table.push_back({wr, ws, report::pct(r.mean_accuracy), sd});
  }
  emit(cfg, out, j.dump(2) + '\n', report::align_table(table));
}

void cmd_ablate_flip(const RunConfig& cfg, std::ostream& out) {
  const auto w = world_config(cfg);
  const auto seeds = seeds_or_default(cfg);
  const auto res = synth::run_flip_ablation(w, seeds, cfg.weights, cfg.folds, cfg.workers);

  std::size_t ge = 0;
  for (std::size_t i = 0; i < seeds.size(); ++i) ge += res.with_flip[i] >= res.without_flip[i];
  ordered_json j;
  j["kind"] = "flip_ablation";
  j["config"] = world_echo(w);
  j["config"]["seeds"] = join_seeds(seeds);
  j["config"]["folds"] = std::to_string(cfg.folds);
  j["config"]["w_real"] = fmt(cfg.weights.w_real);
  j["config"]["w_syn"] = fmt(cfg.weights.w_syn);
  j["opposite_sign_fraction"] = res.opposite_sign_fraction;
  j["baseline"] = res.baseline;
  j["without_flip"] = res.without_flip;
  j["with_flip"] = res.with_flip;
  j["mean_baseline"] = res.mean_baseline();
  j["mean_without_flip"] = res.mean_without_flip();
  j["mean_with_flip"] = res.mean_with_flip();
  j["with_ge_without_fraction"] = static_cast<double>(ge) / static_cast<double>(seeds.size());

  std::string text = report::align_table({{"Method", "Accuracy (%)"},
                                          {"Baseline", report::pct(res.mean_baseline())},
                                          {"TTA w/o flip", report::pct(res.mean_without_flip())},
                                          {"TTA", report::pct(res.mean_with_flip())}});
  text += "Opposite-sign pairs: " + report::pct(res.opposite_sign_fraction) + "%\n";
  emit(cfg, out, j.dump(2) + '\n', text);
}

}  // namespace

std::string_view to_string(Command c) noexcept {
  switch (c) {
    case Command::Plan: return "plan";
    case Command::Aggregate: return "aggregate";
    case Command::Verify: return "verify";
    case Command::Compare: return "compare";
    case Command::Simulate: return "simulate";
    case Command::AblateWeights: return "ablate-weights";
    case Command::AblateFlip: return "ablate-flip";
    case Command::Pipeline: return "pipeline";
  }
  return "?";
}

Command parse_command(std::string_view name) {
  for (Command c : {Command::Plan, Command::Aggregate, Command::Verify, Command::Compare,
                    Command::Simulate, Command::AblateWeights, Command::AblateFlip,
                    Command::Pipeline}) {
    if (to_string(c) == name) return c;
  }
  throw Error(Errc::InvalidConfig, "unknown command '" + std::string(name) + "'");
}

std::vector<std::uint64_t> parse_seed_list(std::string_view text) {
  std::vector<std::uint64_t> out;
  const auto number = [&](std::string_view s) {
    std::uint64_t v = 0;
    auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || end != s.data() + s.size() || s.empty()) {
      throw Error(Errc::InvalidConfig, "bad seed '" + std::string(s) + "'");
    }
    return v;
  };
  while (!text.empty()) {
    const auto comma = text.find(',');
    const std::string_view item = text.substr(0, comma);
    text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);
    if (const auto dash = item.find('-'); dash != std::string_view::npos) {
      const auto lo = number(item.substr(0, dash));
      const auto hi = number(item.substr(dash + 1));
      if (hi < lo) throw Error(Errc::InvalidConfig, "descending seed range");
      for (auto s = lo; s <= hi; ++s) out.push_back(s);
    } else {
      out.push_back(number(item));
    }
  }
  if (out.empty()) throw Error(Errc::InvalidConfig, "empty seed list");
  return out;
}

void run_pipeline(const RunConfig& cfg, std::ostream& out) {
  require_path(cfg.manifest, "--manifest");
  require_path(cfg.out, "--out");
  cfg.weights.validate();
  fs::create_directories(cfg.out);
  const Manifest m = load_manifest(cfg.manifest);

  const auto plan = make_plan(cfg, m);
  const std::string plan_text = selector::format_plan_file(plan);
  detail::write_text(cfg.out / "plan.jsonl", plan_text);

  auto scores = make_scores(cfg, m, plan, sha256_hex(plan_text));
  scores.header.set_config("command", "pipeline");
  const std::string scores_text = aggregator::format_score_file(scores);
  detail::write_text(cfg.out / "scores.jsonl", scores_text);

  auto r = make_report(cfg, m, scores, sha256_hex(scores_text));
  r.header.set_config("command", "pipeline");
  const std::string text = report::format_report_text(r);
  detail::write_text(cfg.out / "report.json", report::format_report_json(r));
  detail::write_text(cfg.out / "report.txt", text);
  out << text;
}

void execute(const RunConfig& cfg, std::ostream& out) {
  if (cfg.workers == 0) throw Error(Errc::InvalidConfig, "--workers must be >= 1");
  switch (cfg.command) {
    case Command::Plan: return cmd_plan(cfg, out);
    case Command::Aggregate: return cmd_aggregate(cfg, out);
    case Command::Verify: return cmd_verify(cfg, out);
    case Command::Compare: return cmd_compare(cfg, out);
    case Command::Simulate: return cmd_simulate(cfg, out);
    case Command::AblateWeights: return cmd_ablate_weights(cfg, out);
    case Command::AblateFlip: return cmd_ablate_flip(cfg, out);
    case Command::Pipeline: return run_pipeline(cfg, out);
  }
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    execute(cfg, out);
    return 0;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code(e.error_class());
  } catch (const fs::filesystem_error& e) {
    err << "error: IoFailure: " << e.what() << '\n';
    return exit_code(ErrorClass::Io);
  }
}

}  // namespace posetta::app
