#pragma once

#include <optional>
#include <string>
#include <vector>

namespace conelab {

/// One judged row read back from a run store.
struct ReportLine {
  std::string run;  // runs/<stem>.json
  std::string scenario;
  std::string quantity;
  double value = 0.0;
  std::string verdict;
  std::string threshold_id;  // empty for fault rows
  int criterion = 0;
  std::string test;
  std::string note;
};

struct Report {
  std::string store;
  std::optional<std::string> scenario;
  int runs = 0;
  std::vector<ReportLine> lines;  // judged rows and faults only
  int failures = 0;

  int exit_code() const { return failures > 0 ? 1 : 0; }
};

/// Loads dir/runs/*.json in sequence order, keeping one scenario when given.
/// Throws ArgumentError when the selection holds no run.
Report build_report(const std::string& dir, const std::optional<std::string>& scenario = std::nullopt);

/// Fixed-width table; failing rows carry a "<-- FAIL" flag.
std::string render_table(const Report& r);

/// Machine-readable summary written next to the runs.  Returns the path.
std::string write_summary(const Report& r);

}  // namespace conelab
