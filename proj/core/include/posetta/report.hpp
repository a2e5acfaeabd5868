#pragma once

// Verification reports (JSON, stable key order) and their aligned-text
// renderings. Accuracies are fractions internally and percentages with two
// decimals in anything meant for people.

#include <filesystem>
#include <string>
#include <vector>

#include "posetta/protocol.hpp"
#include "posetta/run_header.hpp"

namespace posetta::report {

struct VerificationReport {
  RunHeader header;
  std::string dataset;
  protocol::VerificationRun run;
};

std::string format_report_json(const VerificationReport& r);
VerificationReport parse_report_json(const std::string& text);
void write_report(const VerificationReport& r, const std::filesystem::path& path);
VerificationReport read_report(const std::filesystem::path& path);

/// Percentage with two decimals, e.g. 0.93644 -> "93.64".
std::string pct(double fraction);
/// Signed percentage-point delta with two decimals, e.g. "+0.37".
std::string signed_pp(double delta_pp);

/// Per-fold table plus the mean, one line per fold.
std::string format_report_text(const VerificationReport& r);

struct ComparisonEntry {
  std::string dataset;
  protocol::VerificationRun reference;
  protocol::VerificationRun candidate;
};

/// Summary table: one column per dataset plus Avg, rows for the
/// reference run, the candidate run and their delta, followed by fold-wise
/// deltas per dataset. Throws ProtocolMismatch via compare_runs.
std::string format_comparison(const std::vector<ComparisonEntry>& entries,
                              const std::string& reference_label,
                              const std::string& candidate_label);

/// Simple aligned table: first column left-aligned, the rest right-aligned.
std::string align_table(const std::vector<std::vector<std::string>>& rows);

}  // namespace posetta::report
