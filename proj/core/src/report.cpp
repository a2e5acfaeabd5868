#include "posetta/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "json_lines.hpp"
#include "posetta/error.hpp"
#include "run_header_json.hpp"

namespace posetta::report {

namespace {

using ordered_json = nlohmann::ordered_json;

double round2(double v) { return std::round(v * 100.0) / 100.0; }

}  // namespace

std::string pct(double fraction) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", 100.0 * fraction);
  return buf;
}

std::string signed_pp(double delta_pp) {
  char buf[32];
  // no "-0.00"
  const double r = round2(delta_pp);
  std::snprintf(buf, sizeof(buf), "%+.2f", r == 0.0 ? 0.0 : r);
  return buf;
}

std::string format_report_json(const VerificationReport& r) {
  ordered_json j = header_to_json(r.header);
  j["dataset"] = r.dataset;
  j["n_pairs"] = r.run.n_pairs;
  j["folds"] = r.run.fold_sizes.size();
  j["fold_sizes"] = r.run.fold_sizes;
  j["fold_correct"] = r.run.fold_correct;
  j["fold_accuracies"] = r.run.fold_accuracies;
  j["thresholds"] = r.run.fold_thresholds;
  j["mean_accuracy"] = r.run.mean_accuracy;
  j["mean_accuracy_pct"] = round2(100.0 * r.run.mean_accuracy);
  j["fallback_rate"] = r.run.fallback_rate;
  return j.dump(2) + '\n';
}

VerificationReport parse_report_json(const std::string& text) {
  VerificationReport r;
  try {
    const auto j = ordered_json::parse(text);
    r.header = header_from_json(j);
    r.dataset = j.value("dataset", std::string{});
    r.run.n_pairs = j.at("n_pairs").get<std::size_t>();
    r.run.fold_sizes = j.at("fold_sizes").get<std::vector<std::size_t>>();
    r.run.fold_correct = j.at("fold_correct").get<std::vector<std::size_t>>();
    r.run.fold_accuracies = j.at("fold_accuracies").get<std::vector<double>>();
    r.run.fold_thresholds = j.at("thresholds").get<std::vector<double>>();
    r.run.mean_accuracy = j.at("mean_accuracy").get<double>();
    r.run.fallback_rate = j.at("fallback_rate").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::SchemaViolation, std::string("report: ") + e.what());
  }
  return r;
}

void write_report(const VerificationReport& r, const std::filesystem::path& path) {
  detail::write_text(path, format_report_json(r));
}

VerificationReport read_report(const std::filesystem::path& path) {
  return parse_report_json(detail::read_text(path));
}

std::string align_table(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width;
  for (const auto& row : rows) {
    if (row.size() > width.size()) width.resize(row.size(), 0);
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  }
  std::string out;
  for (const auto& row : rows) {
    std::string line;
    for (std::size_t c = 0; c < row.size(); ++c) {
      const std::string pad(width[c] - row[c].size(), ' ');
      if (c == 0) {
        line += row[c] + pad;
      } else {
        line += "  " + pad + row[c];
      }
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out += line + '\n';
  }
  return out;
}

std::string format_report_text(const VerificationReport& r) {
  std::vector<std::vector<std::string>> rows;
  rows.push_back({"Fold", "Pairs", "Threshold", "Accuracy (%)"});
  for (std::size_t f = 0; f < r.run.fold_accuracies.size(); ++f) {
    char t[32];
    std::snprintf(t, sizeof(t), "%.4f", r.run.fold_thresholds[f]);
    rows.push_back({std::to_string(f), std::to_string(r.run.fold_sizes[f]), t,
                    pct(r.run.fold_accuracies[f])});
  }
  rows.push_back({"Mean", std::to_string(r.run.n_pairs), "", pct(r.run.mean_accuracy)});
  std::string out;
  if (!r.dataset.empty()) out += "Dataset: " + r.dataset + '\n';
  out += align_table(rows);
  out += "Fallback rate: " + pct(r.run.fallback_rate) + "%\n";
  return out;
}

std::string format_comparison(const std::vector<ComparisonEntry>& entries,
                              const std::string& reference_label,
                              const std::string& candidate_label) {
  std::vector<protocol::DeltaReport> deltas;
  deltas.reserve(entries.size());
  for (const auto& e : entries) deltas.push_back(protocol::compare_runs(e.candidate, e.reference));

  std::vector<std::string> header{"Method"};
  std::vector<std::string> ref_row{reference_label};
  std::vector<std::string> cand_row{candidate_label};
  std::vector<std::string> delta_row{"Delta (pp)"};
  double ref_sum = 0.0;
  double cand_sum = 0.0;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    header.push_back(entries[i].dataset.empty() ? "set" + std::to_string(i) : entries[i].dataset);
    ref_row.push_back(pct(entries[i].reference.mean_accuracy));
    cand_row.push_back(pct(entries[i].candidate.mean_accuracy));
    delta_row.push_back(signed_pp(deltas[i].mean_delta_pp));
    ref_sum += entries[i].reference.mean_accuracy;
    cand_sum += entries[i].candidate.mean_accuracy;
  }
  if (!entries.empty()) {
    const double n = static_cast<double>(entries.size());
    header.push_back("Avg");
    ref_row.push_back(pct(ref_sum / n));
    cand_row.push_back(pct(cand_sum / n));
    delta_row.push_back(signed_pp(100.0 * (cand_sum - ref_sum) / n));
  }
  std::string out = "Accuracy (%)\n" + align_table({header, ref_row, cand_row, delta_row});

  for (std::size_t i = 0; i < entries.size(); ++i) {
    std::vector<std::vector<std::string>> rows;
    rows.push_back({"Fold", reference_label, candidate_label, "Delta (pp)"});
    for (std::size_t f = 0; f < deltas[i].fold_delta_pp.size(); ++f) {
      rows.push_back({std::to_string(f), pct(entries[i].reference.fold_accuracies[f]),
                      pct(entries[i].candidate.fold_accuracies[f]),
                      signed_pp(deltas[i].fold_delta_pp[f])});
    }
    out += "\nFold-wise: " + header[i + 1] + '\n' + align_table(rows);
  }
  return out;
}

}  // namespace posetta::report
