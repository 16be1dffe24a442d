#include "gbcal/bench/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace gbcal {

namespace {

std::string fmt_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& s, int lineno, const char* field) {
  if (s == "nan" || s == "-nan") return std::nan("");
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw CsvError(lineno, std::string("bad value for ") + field + ": '" + s + "'");
  return v;
}

int parse_int(const std::string& s, int lineno, const char* field) {
  int v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw CsvError(lineno, std::string("bad value for ") + field + ": '" + s + "'");
  return v;
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

struct RawLines {
  std::vector<std::string> lines;
  std::vector<bool> terminated;
  std::vector<std::size_t> end_offset;  // byte offset just past line (+newline)
};

RawLines read_lines(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CsvError(0, "cannot open '" + path + "'");
  std::string content((std::istreambuf_iterator<char>(in)),
                      std::istreambuf_iterator<char>());
  RawLines raw;
  std::size_t start = 0;
  while (start < content.size()) {
    const std::size_t nl = content.find('\n', start);
    if (nl == std::string::npos) {
      raw.lines.push_back(content.substr(start));
      raw.terminated.push_back(false);
      raw.end_offset.push_back(content.size());
      break;
    }
    raw.lines.push_back(content.substr(start, nl - start));
    raw.terminated.push_back(true);
    raw.end_offset.push_back(nl + 1);
    start = nl + 1;
  }
  return raw;
}

}  // namespace

std::string format_record(const ReplicationRecord& r) {
  std::ostringstream os;
  os << r.experiment << ',' << r.degree << ',' << r.n << ',' << r.method << ','
     << r.rep << ',' << fmt_double(r.eta_hat) << ',' << r.covered << ','
     << fmt_double(r.mse) << ',' << fmt_double(r.avg_marginal_var) << ','
     << fmt_double(r.interval_length) << ',' << r.degenerate << ',' << r.seed_path
     << ',' << fmt_double(r.wall_ms);
  return os.str();
}

ReplicationRecord parse_record(const std::string& line, int lineno) {
  const std::vector<std::string> f = split_fields(line);
  if (f.size() != 13)
    throw CsvError(lineno, "expected 13 fields, got " + std::to_string(f.size()));
  ReplicationRecord r;
  r.experiment = f[0];
  r.degree = parse_int(f[1], lineno, "degree");
  r.n = parse_int(f[2], lineno, "n");
  r.method = f[3];
  r.rep = parse_int(f[4], lineno, "rep");
  r.eta_hat = parse_double(f[5], lineno, "eta_hat");
  r.covered = parse_int(f[6], lineno, "covered");
  r.mse = parse_double(f[7], lineno, "mse");
  r.avg_marginal_var = parse_double(f[8], lineno, "avg_marginal_var");
  r.interval_length = parse_double(f[9], lineno, "interval_length");
  r.degenerate = parse_int(f[10], lineno, "degenerate");
  r.seed_path = f[11];
  r.wall_ms = parse_double(f[12], lineno, "wall_ms");
  if (r.covered != 0 && r.covered != 1)
    throw CsvError(lineno, "covered must be 0 or 1");
  if (r.degenerate != 0 && r.degenerate != 1)
    throw CsvError(lineno, "degenerate must be 0 or 1");
  return r;
}

std::vector<ReplicationRecord> read_records(const std::string& path) {
  const RawLines raw = read_lines(path);
  if (raw.lines.empty()) throw CsvError(1, "empty file, expected header");
  if (raw.lines[0] != kCsvHeader) throw CsvError(1, "unexpected header");
  std::vector<ReplicationRecord> out;
  for (std::size_t i = 1; i < raw.lines.size(); ++i) {
    const int lineno = static_cast<int>(i) + 1;
    if (!raw.terminated[i]) throw CsvError(lineno, "unterminated final record");
    out.push_back(parse_record(raw.lines[i], lineno));
  }
  return out;
}

ResumeReadResult read_records_for_resume(const std::string& path) {
  const RawLines raw = read_lines(path);
  if (raw.lines.empty()) throw CsvError(1, "empty file, expected header");
  if (raw.lines[0] != kCsvHeader) throw CsvError(1, "unexpected header");
  ResumeReadResult out;
  out.clean_prefix_bytes = raw.end_offset[0];
  for (std::size_t i = 1; i < raw.lines.size(); ++i) {
    const int lineno = static_cast<int>(i) + 1;
    const bool is_tail = i + 1 == raw.lines.size();
    if (!raw.terminated[i]) {
      // The writer died mid-line; everything before it is intact.
      out.dropped_partial_tail = true;
      break;
    }
    try {
      out.records.push_back(parse_record(raw.lines[i], lineno));
    } catch (const CsvError&) {
      if (is_tail) {
        out.dropped_partial_tail = true;
        break;
      }
      throw;
    }
    out.clean_prefix_bytes = raw.end_offset[i];
  }
  return out;
}

}  // namespace gbcal
