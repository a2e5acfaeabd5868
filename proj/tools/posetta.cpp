// posetta: pose-aware test-time augmentation for face verification over
// precomputed embedding manifests.

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "posetta/app.hpp"
#include "posetta/error.hpp"

namespace {

using posetta::app::Command;
using posetta::app::RunConfig;

struct Flags {
  std::string seeds;
  std::string policy = "real-fallback";
};

void add_weights(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--w-real", cfg.weights.w_real, "weight for real representations")
      ->capture_default_str();
  sub->add_option("--w-syn", cfg.weights.w_syn, "weight for synthetic representations")
      ->capture_default_str();
}

void add_policy(CLI::App* sub, Flags& f) {
  sub->add_option("--policy", f.policy, "coverage policy")
      ->check(CLI::IsMember({"strict", "real-fallback"}))
      ->capture_default_str();
}

void add_folds(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--folds", cfg.folds, "number of folds")->capture_default_str();
}

void add_workers(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--workers", cfg.workers, "worker threads")->capture_default_str();
}

void add_world(CLI::App* sub, RunConfig& cfg, Flags& f) {
  sub->add_option("--config", cfg.world_config, "world config file (key = value)");
  sub->add_option("--set", cfg.world_overrides, "override a world config key, key=value");
  sub->add_option("--seeds", f.seeds, "seed list, e.g. 0-19 or 1,4,9");
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  Flags f;
  CLI::App app{"posetta: pose-aware TTA face verification over embedding manifests"};
  app.require_subcommand(1);

  auto* plan = app.add_subcommand("plan", "select source/driving roles, write a plan file");
  plan->add_option("--manifest", cfg.manifest, "manifest index (.jsonl)")->required();
  plan->add_option("--out", cfg.out, "plan file to write")->required();

  auto* agg = app.add_subcommand("aggregate", "aggregate representations and score pairs");
  agg->add_option("--manifest", cfg.manifest, "manifest index")->required();
  agg->add_option("--plan", cfg.plan, "plan file")->required();
  agg->add_option("--out", cfg.out, "score file to write")->required();
  add_weights(agg, cfg);
  add_policy(agg, f);
  add_workers(agg, cfg);

  auto* ver = app.add_subcommand("verify", "k-fold verification accuracy from a score file");
  ver->add_option("--manifest", cfg.manifest, "manifest index")->required();
  ver->add_option("--scores", cfg.scores, "score file")->required();
  ver->add_option("--out", cfg.out, "report JSON (a .txt summary is written next to it)");
  ver->add_option("--dataset", cfg.dataset, "dataset label for tables");
  add_folds(ver, cfg);
  add_workers(ver, cfg);

  auto* cmp = app.add_subcommand("compare", "delta table between reports");
  cmp->add_option("--reference", cfg.reference_reports, "reference report(s)")->required();
  cmp->add_option("--candidate", cfg.candidate_reports, "candidate report(s), same order")
      ->required();
  cmp->add_option("--reference-label", cfg.reference_label)->capture_default_str();
  cmp->add_option("--candidate-label", cfg.candidate_label)->capture_default_str();
  cmp->add_option("--out", cfg.out, "comparison JSON");

  auto* sim = app.add_subcommand("simulate", "emit a synthetic world manifest");
  add_world(sim, cfg, f);
  sim->add_option("--dataset", cfg.dataset, "dataset label stored in metadata");
  sim->add_option("--out", cfg.out, "manifest index to write")->required();

  auto* abw = app.add_subcommand("ablate-weights", "weight sweep over synthetic worlds");
  add_world(abw, cfg, f);
  add_folds(abw, cfg);
  add_workers(abw, cfg);
  abw->add_option("--out", cfg.out, "result JSON");

  auto* abf = app.add_subcommand("ablate-flip", "flip vs no-flip over synthetic worlds");
  add_world(abf, cfg, f);
  add_weights(abf, cfg);
  add_folds(abf, cfg);
  add_workers(abf, cfg);
  abf->add_option("--out", cfg.out, "result JSON");

  auto* pipe = app.add_subcommand("pipeline", "plan, aggregate, verify and report in one go");
  pipe->add_option("--manifest", cfg.manifest, "manifest index")->required();
  pipe->add_option("--out", cfg.out, "output directory")->required();
  pipe->add_option("--dataset", cfg.dataset, "dataset label for tables");
  add_weights(pipe, cfg);
  add_policy(pipe, f);
  add_folds(pipe, cfg);
  add_workers(pipe, cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    cfg.command = posetta::app::parse_command(app.get_subcommands().front()->get_name());
    cfg.policy = posetta::aggregator::parse_policy(f.policy);
    if (!f.seeds.empty()) cfg.seeds = posetta::app::parse_seed_list(f.seeds);
  } catch (const posetta::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return posetta::exit_code(e.error_class());
  }
  return posetta::app::run(cfg, std::cout, std::cerr);
}
