#pragma once

#include <string>
#include <vector>

#include "gbcal/bench/csv.hpp"

namespace gbcal {

// Monte Carlo averages for one (degree, n, method) cell.  Degenerate
// records are excluded from every average and counted in `excluded`;
// per-metric means additionally skip NaN entries (interval length is NaN
// for ellipsoid targets, marginal variance for none).
struct SummaryRow {
  std::string experiment;
  int degree = 0;
  int n = 0;
  std::string method;
  int total = 0;
  int used = 0;
  int excluded = 0;
  double mean_eta_hat = 0.0, se_eta_hat = 0.0;
  double coverage = 0.0, se_coverage = 0.0;  // se = sqrt(p(1-p)/used)
  double mean_mse = 0.0, se_mse = 0.0;
  double mean_variance = 0.0, se_variance = 0.0;
  double mean_length = 0.0, se_length = 0.0;
};

struct SummaryTable {
  std::string experiment;
  std::vector<SummaryRow> rows;  // sorted by degree, n, method order
};

SummaryTable summarize(const std::vector<ReplicationRecord>& records);
SummaryTable summarize_file(const std::string& path);

// Paper-style table: one row per cell with columns eta_hat, Coverage, MSE,
// then Variance (ellipsoid experiments) or Length (interval experiments),
// each as "mean (se)".
std::string to_markdown(const SummaryTable& table);
// Full machine-readable rendering with every column.
std::string to_csv(const SummaryTable& table);
// Tidy per-curve rendering for the toy sweep: eta* = degree/10 against the
// mean selected learning rate and the achieved coverage.
std::string toy_curve_csv(const SummaryTable& table);

}  // namespace gbcal
