#include "gbcal/bench/summary.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <sstream>

#include "gbcal/bench/config.hpp"

namespace gbcal {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Welford {
  long count = 0;
  double mean = 0.0;
  double m2 = 0.0;
  void add(double v) {
    if (std::isnan(v)) return;
    ++count;
    const double d = v - mean;
    mean += d / static_cast<double>(count);
    m2 += d * (v - mean);
  }
  double avg() const { return count ? mean : kNaN; }
  double se() const {
    if (count < 1) return kNaN;
    if (count == 1) return 0.0;
    const double var = m2 / static_cast<double>(count - 1);
    return std::sqrt(var / static_cast<double>(count));
  }
};

int method_rank(const std::string& name) {
  try {
    return static_cast<int>(parse_method(name));
  } catch (const ConfigError&) {
    return 100;
  }
}

std::string fmt(double v, const char* spec = "%.4g") {
  if (std::isnan(v)) return "nan";
  char buf[48];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

}  // namespace

SummaryTable summarize(const std::vector<ReplicationRecord>& records) {
  struct Cell {
    int total = 0, excluded = 0;
    long covered = 0;
    Welford eta, mse, variance, length;
  };
  std::map<std::tuple<int, int, int, std::string>, Cell> cells;
  SummaryTable table;
  for (const ReplicationRecord& r : records) {
    if (table.experiment.empty()) table.experiment = r.experiment;
    Cell& c = cells[{r.degree, r.n, method_rank(r.method), r.method}];
    ++c.total;
    if (r.degenerate) {
      ++c.excluded;
      continue;
    }
    c.covered += r.covered;
    c.eta.add(r.eta_hat);
    c.mse.add(r.mse);
    c.variance.add(r.avg_marginal_var);
    c.length.add(r.interval_length);
  }

  for (const auto& [key, c] : cells) {
    SummaryRow row;
    row.experiment = table.experiment;
    row.degree = std::get<0>(key);
    row.n = std::get<1>(key);
    row.method = std::get<3>(key);
    row.total = c.total;
    row.excluded = c.excluded;
    row.used = c.total - c.excluded;
    row.mean_eta_hat = c.eta.avg();
    row.se_eta_hat = c.eta.se();
    if (row.used > 0) {
      const double p = static_cast<double>(c.covered) / row.used;
      row.coverage = p;
      row.se_coverage = std::sqrt(p * (1.0 - p) / row.used);
    } else {
      row.coverage = kNaN;
      row.se_coverage = kNaN;
    }
    row.mean_mse = c.mse.avg();
    row.se_mse = c.mse.se();
    row.mean_variance = c.variance.avg();
    row.se_variance = c.variance.se();
    row.mean_length = c.length.avg();
    row.se_length = c.length.se();
    table.rows.push_back(std::move(row));
  }
  return table;
}

SummaryTable summarize_file(const std::string& path) {
  return summarize(read_records(path));
}

std::string to_markdown(const SummaryTable& table) {
  bool any_length = false;
  for (const SummaryRow& r : table.rows)
    if (!std::isnan(r.mean_length)) any_length = true;
  const char* last_col = any_length ? "Length" : "Variance";

  std::ostringstream os;
  os << "| Degree | n | Method | eta_hat | Coverage | MSE | " << last_col
     << " | Excluded |\n";
  os << "|---|---|---|---|---|---|---|---|\n";
  for (const SummaryRow& r : table.rows) {
    const double m = any_length ? r.mean_length : r.mean_variance;
    const double s = any_length ? r.se_length : r.se_variance;
    os << "| " << r.degree << " | " << r.n << " | " << r.method << " | "
       << fmt(r.mean_eta_hat) << " (" << fmt(r.se_eta_hat) << ") | "
       << fmt(r.coverage, "%.3f") << " (" << fmt(r.se_coverage, "%.3f") << ") | "
       << fmt(r.mean_mse) << " (" << fmt(r.se_mse) << ") | " << fmt(m) << " ("
       << fmt(s) << ") | " << r.excluded << "/" << r.total << " |\n";
  }
  return os.str();
}

std::string to_csv(const SummaryTable& table) {
  std::ostringstream os;
  os << "experiment,degree,n,method,total,used,excluded,mean_eta_hat,se_eta_hat,"
        "coverage,se_coverage,mean_mse,se_mse,mean_variance,se_variance,"
        "mean_length,se_length\n";
  for (const SummaryRow& r : table.rows) {
    os << r.experiment << ',' << r.degree << ',' << r.n << ',' << r.method << ','
       << r.total << ',' << r.used << ',' << r.excluded << ','
       << fmt(r.mean_eta_hat, "%.8g") << ',' << fmt(r.se_eta_hat, "%.8g") << ','
       << fmt(r.coverage, "%.8g") << ',' << fmt(r.se_coverage, "%.8g") << ','
       << fmt(r.mean_mse, "%.8g") << ',' << fmt(r.se_mse, "%.8g") << ','
       << fmt(r.mean_variance, "%.8g") << ',' << fmt(r.se_variance, "%.8g") << ','
       << fmt(r.mean_length, "%.8g") << ',' << fmt(r.se_length, "%.8g") << '\n';
  }
  return os.str();
}

std::string toy_curve_csv(const SummaryTable& table) {
  std::ostringstream os;
  os << "eta_star,n,method,mean_eta_hat,se_eta_hat,coverage,se_coverage,used\n";
  for (const SummaryRow& r : table.rows) {
    os << fmt(r.degree / 10.0, "%.2f") << ',' << r.n << ',' << r.method << ','
       << fmt(r.mean_eta_hat, "%.8g") << ',' << fmt(r.se_eta_hat, "%.8g") << ','
       << fmt(r.coverage, "%.8g") << ',' << fmt(r.se_coverage, "%.8g") << ','
       << r.used << '\n';
  }
  return os.str();
}

}  // namespace gbcal
