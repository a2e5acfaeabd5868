#include "doctest.h"
#include "posetta/error.hpp"
#include "posetta/report.hpp"
#include "json.hpp"

using namespace posetta;
using namespace posetta::report;

namespace {

VerificationReport sample_report() {
  VerificationReport r;
  r.header.kind = "verification_report";
  r.header.set_config("folds", "2");
  r.header.set_input("scores_sha256", "00ff");
  r.dataset = "CPLFW";
  r.run.n_pairs = 7;
  r.run.fold_sizes = {4, 3};
  r.run.fold_correct = {3, 3};
  r.run.fold_thresholds = {0.25, -0.0005};
  r.run.fold_accuracies = {0.75, 1.0};
  r.run.mean_accuracy = 0.875;
  r.run.fallback_rate = 1.0 / 7;
  return r;
}

}  // namespace

TEST_CASE("percent formatting") {
  CHECK(pct(0.93644) == "93.64");
  CHECK(pct(1.0) == "100.00");
  CHECK(signed_pp(0.37) == "+0.37");
  CHECK(signed_pp(-1.234) == "-1.23");
  CHECK(signed_pp(0.0) == "+0.00");
}

TEST_CASE("report JSON carries the contract fields and round-trips") {
  const auto r = sample_report();
  const std::string text = format_report_json(r);
  const auto j = nlohmann::json::parse(text);
  CHECK(j.at("mean_accuracy_pct").get<double>() == 87.5);
  CHECK(j.at("fold_accuracies").size() == 2);
  CHECK(j.at("thresholds").at(1).get<double>() == -0.0005);
  CHECK(j.at("fallback_rate").get<double>() == doctest::Approx(1.0 / 7));
  CHECK(j.at("config").at("folds") == "2");
  CHECK(j.at("inputs").at("scores_sha256") == "00ff");
  CHECK_FALSE(j.contains("timestamp"));

  const auto back = parse_report_json(text);
  CHECK(format_report_json(back) == text);
  CHECK(back.run.fold_correct == r.run.fold_correct);
  CHECK(back.dataset == "CPLFW");
  CHECK_THROWS_AS(parse_report_json("{\"kind\":\"verification_report\"}"), Error);
}

TEST_CASE("text summary") {
  const auto text = format_report_text(sample_report());
  CHECK(text.find("75.00") != std::string::npos);
  CHECK(text.find("87.50") != std::string::npos);
}

TEST_CASE("comparison table") {
  auto ref = sample_report().run;
  auto cand = ref;
  cand.fold_accuracies = {1.0, 1.0};
  cand.mean_accuracy = 1.0;
  const auto table = format_comparison({{"CPLFW", ref, cand}, {"LFW", ref, ref}}, "Baseline", "Ours");
  CHECK(table.find("CPLFW") != std::string::npos);
  CHECK(table.find("Avg") != std::string::npos);
  CHECK(table.find("+12.50") != std::string::npos);
  CHECK(table.find("+6.25") != std::string::npos);
  CHECK(table.find("+25.00") != std::string::npos);

  auto other = ref;
  other.n_pairs = 8;
  CHECK_THROWS_AS(format_comparison({{"x", ref, other}}, "a", "b"), Error);
}

TEST_CASE("aligned table pads columns") {
  const auto t = align_table({{"Method", "Acc"}, {"Baseline", "91.02"}});
  CHECK(t == "Method      Acc\nBaseline  91.02\n");
}
