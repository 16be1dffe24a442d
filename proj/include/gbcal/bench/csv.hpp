#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "gbcal/uq/metrics.hpp"

namespace gbcal {

// Malformed record file; `line` is 1-based (line 1 is the header).
struct CsvError : std::runtime_error {
  CsvError(int line_in, const std::string& msg)
      : std::runtime_error("line " + std::to_string(line_in) + ": " + msg),
        line(line_in) {}
  int line;
};

// Column order is part of the output contract.
inline constexpr const char* kCsvHeader =
    "experiment,degree,n,method,rep,eta_hat,covered,mse,avg_marginal_var,"
    "interval_length,degenerate,seed_path,wall_ms";

// One CSV line, no terminator.  Doubles use shortest round-trip formatting,
// so equal values always produce equal bytes.
std::string format_record(const ReplicationRecord& r);
ReplicationRecord parse_record(const std::string& line, int lineno);

// Strict reader for summaries: header plus well-formed records, or CsvError.
std::vector<ReplicationRecord> read_records(const std::string& path);

// Lenient reader for resuming an interrupted run: a trailing record that is
// incomplete (the writer died mid-line) is dropped, and clean_prefix_bytes
// marks where the intact part of the file ends so the caller can truncate
// before appending.  Anything malformed before the tail still throws.
struct ResumeReadResult {
  std::vector<ReplicationRecord> records;
  std::size_t clean_prefix_bytes = 0;
  bool dropped_partial_tail = false;
};
ResumeReadResult read_records_for_resume(const std::string& path);

}  // namespace gbcal
