#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "conelab/config.hpp"

namespace conelab {

/// One CSV line.  Parameter fields left NaN (or -1) take the config value.
struct Row {
  std::string quantity;
  double value = NAN;
  double stderr_ = NAN;
  double slope = NAN;
  double r2 = NAN;
  int n = -1;
  int N = -1;
  double L = NAN;
  double delta = NAN;
  double alpha = NAN;
  double beta = NAN;
  double lambda = NAN;
  double p = NAN;
  std::string verdict = "info";  // pass, fail or info
  std::string threshold_id;
  std::string note;
};

/// Sets the verdict of r from the threshold table entry.
Row& judge(Row& r, const std::string& threshold_id);

struct RunRecord {
  ExperimentConfig config;
  std::vector<Row> rows;
  double runtime_ms = 0.0;

  bool passed() const;
};

/// Rows of one scenario; sweep points that throw become "fault" rows.
std::vector<Row> run_scenario(const ExperimentConfig& cfg);

/// Times run_scenario and adds the runtime verdict.
RunRecord run(const ExperimentConfig& cfg);

inline const char* kCsvHeader =
    "scenario,n,N,L,delta,alpha,beta,lambda,p,quantity,value,stderr,slope,r2,seed,runtime_ms,verdict";

/// CSV lines (no header) of a record; runtime_ms is written as 0 when deterministic.
std::vector<std::string> csv_lines(const RunRecord& r, bool deterministic);

/// Appends the record to dir/results.csv and writes dir/runs/<seq>-<scenario>.{csv,json}.
/// Returns the JSON path.
std::string append_to_store(const std::string& dir, const RunRecord& r);

}  // namespace conelab
