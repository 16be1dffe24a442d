#pragma once

#include <string>

#include "gbcal/uq/region.hpp"

namespace gbcal {

// One row of benchmark output: a (dataset, method) cell of a Monte Carlo
// study.  interval_length is NaN for ellipsoid targets; degenerate rows keep
// their identity fields but may carry NaN metrics.
struct ReplicationRecord {
  std::string experiment;
  int degree = 0;
  int n = 0;
  std::string method;
  int rep = 0;
  double eta_hat = 0.0;
  int covered = 0;
  double mse = 0.0;
  double avg_marginal_var = 0.0;
  double interval_length = 0.0;
  int degenerate = 0;
  std::string seed_path;
  double wall_ms = 0.0;
};

// Fills the evaluation fields of a record from a fitted posterior, its
// credible region, and the target truth (the KL projection or the exact
// functional of the sampling distribution).  `target` maps parameter draws
// to the reported scalar for draw-based interval targets; NIG handles are
// always summarized through their beta block.
void replication_metrics(const PosteriorHandle& handle, const CredibleRegion& region,
                         const Eigen::VectorXd& truth, ReplicationRecord* record,
                         const ScalarTarget& target = {});

}  // namespace gbcal
