#pragma once

#include <memory>

#include "gbcal/bench/config.hpp"
#include "gbcal/bench/csv.hpp"
#include "gbcal/dgp/dgp.hpp"
#include "gbcal/model.hpp"

namespace gbcal {

// Model and sampling distribution behind each experiment.
std::unique_ptr<Model> make_model(Experiment e);
std::unique_ptr<Dgp> make_dgp(Experiment e, int degree);

// Variance mismatch eta* = (sigma/sigma*)^2 encoded by a toy-curve degree.
double toy_eta_star(int degree);

// All records of one replication: derive the stream (base_seed, [experiment,
// degree, n, rep]), draw the dataset, and run every configured method
// through selection, posterior and region.  Failures become degenerate
// records; the call never throws for statistical reasons.
std::vector<ReplicationRecord> run_replication(const ExperimentConfig& cfg,
                                               int degree, int n, int rep);

struct RunResult {
  std::size_t rows_written = 0;    // appended by this invocation
  std::size_t rows_skipped = 0;    // already present and kept
  std::size_t degenerate_rows = 0; // total in the final file
  std::size_t total_rows = 0;
};

// Runs the full degree x sample-size x replication grid and streams records
// to cfg.out_path in a fixed canonical order, regardless of worker count.
// With resume = true, intact records already in the file are kept and only
// the missing (degree, n, rep, method) cells are computed; a partial final
// line left by a crash is truncated away.  The result's counters drive the
// CLI exit code (3 when degenerate_rows > 0).
RunResult run_experiment(const ExperimentConfig& cfg, bool resume = false);

}  // namespace gbcal
