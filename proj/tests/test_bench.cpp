#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "gbcal/bench/config.hpp"
#include "gbcal/bench/csv.hpp"
#include "gbcal/bench/runner.hpp"
#include "gbcal/bench/summary.hpp"
#include "gbcal/dgp/dgp.hpp"
#include "gbcal/lrate/select.hpp"
#include "gbcal/model.hpp"

using namespace gbcal;
namespace fs = std::filesystem;

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

fs::path temp_root() {
  static const fs::path root = [] {
    const fs::path p = fs::temp_directory_path() / "gbcal_bench_tests";
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
  }();
  return root;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void spit(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

// Everything except the timing field, which is exempt from the determinism
// contract (it measures the host, not the computation).
bool records_equal_mod_wall(const ReplicationRecord& a, const ReplicationRecord& b) {
  const auto same = [](double x, double y) {
    return (std::isnan(x) && std::isnan(y)) || x == y;
  };
  return a.experiment == b.experiment && a.degree == b.degree && a.n == b.n &&
         a.method == b.method && a.rep == b.rep && same(a.eta_hat, b.eta_hat) &&
         a.covered == b.covered && same(a.mse, b.mse) &&
         same(a.avg_marginal_var, b.avg_marginal_var) &&
         same(a.interval_length, b.interval_length) &&
         a.degenerate == b.degenerate && a.seed_path == b.seed_path;
}

ExperimentConfig small_toy_config(const std::string& out_name) {
  ExperimentConfig cfg;
  cfg.experiment = Experiment::ToyCurve;
  cfg.degrees = {2, 5};
  cfg.sample_sizes = {40, 80};
  cfg.replications = 3;
  cfg.methods = {Method::Lyddon, Method::HolmesWalker};
  cfg.safebayes_grid = default_safebayes_grid();
  cfg.out_path = (temp_root() / out_name).string();
  return cfg;
}

ReplicationRecord make_record(int degree, int n, const std::string& method, int rep,
                              double eta, int covered, double mse, double var,
                              double length, int degenerate) {
  ReplicationRecord r;
  r.experiment = "toy_curve";
  r.degree = degree;
  r.n = n;
  r.method = method;
  r.rep = rep;
  r.eta_hat = eta;
  r.covered = covered;
  r.mse = mse;
  r.avg_marginal_var = var;
  r.interval_length = length;
  r.degenerate = degenerate;
  r.seed_path = "0/0/0/0";
  r.wall_ms = 1.0;
  return r;
}

// Locates the command-line binary when the tests run from the build tree;
// returns an empty path (and the caller skips) elsewhere.
fs::path find_cli() {
  for (const char* candidate :
       {"../gbcal", "./gbcal", "./build/gbcal", "../../gbcal"}) {
    std::error_code ec;
    if (fs::exists(candidate, ec)) return fs::canonical(candidate);
  }
  return {};
}

struct CommandResult {
  int exit_code = -1;
  std::string output;
};

CommandResult run_command(const std::string& command) {
  CommandResult res;
  FILE* pipe = popen((command + " 2>/dev/null").c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[512];
  while (fgets(buf, sizeof buf, pipe)) res.output += buf;
  const int status = pclose(pipe);
  res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return res;
}

}  // namespace

TEST_CASE("config parsing: defaults, names, and method compatibility") {
  const ExperimentConfig cfg = parse_config(R"({"experiment": "toy_curve"})");
  CHECK(cfg.experiment == Experiment::ToyCurve);
  CHECK(cfg.degrees == std::vector<int>{1, 2, 3, 4, 5, 6, 7, 8, 9, 10});
  CHECK(cfg.sample_sizes == std::vector<int>{100, 800});
  CHECK(cfg.replications == 200);
  CHECK(cfg.methods.size() == 4);
  CHECK(cfg.alpha == 0.05);
  CHECK(cfg.safebayes_grid.size() == 20);
  CHECK(cfg.posterior_draws == 2000);
  CHECK(cfg.base_seed == 20260814);
  CHECK(cfg.workers == 1);
  CHECK(cfg.out_path == "records.csv");
  CHECK(cfg.gpc.B == 100);
  CHECK(cfg.gpc.step_exponent == 0.51);
  CHECK(cfg.gpc.fresh_pool == false);

  const ExperimentConfig lin = parse_config(R"({"experiment": "linear_dependent"})");
  CHECK(lin.degrees == std::vector<int>{1, 2, 3});
  CHECK(lin.sample_sizes == std::vector<int>{100, 200, 400});

  // The Gibbs posterior has no score, so the two score-based selectors are
  // not offered for it.
  const ExperimentConfig gibbs = parse_config(R"({"experiment": "gibbs_mcid"})");
  CHECK(gibbs.methods == std::vector<Method>{Method::Gpc, Method::SafeBayes});
  CHECK(!method_supported(Experiment::GibbsMcid, Method::HolmesWalker));
  CHECK(!method_supported(Experiment::GibbsMcid, Method::Lyddon));
  CHECK(method_supported(Experiment::LinearT, Method::Lyddon));

  for (const char* name :
       {"toy_curve", "linear_dependent", "linear_t", "logistic_mcid", "gibbs_mcid"})
    CHECK(experiment_name(parse_experiment(name)) == name);
  for (const char* name : {"GPC", "SafeBayes", "HolmesWalker", "Lyddon"})
    CHECK(method_name(parse_method(name)) == name);
  CHECK_THROWS_AS(parse_experiment("linear"), ConfigError);
  CHECK_THROWS_AS(parse_method("gpc"), ConfigError);

  // Explicit values reach every field.
  const ExperimentConfig full = parse_config(R"({
    "experiment": "linear_t",
    "degrees": [2],
    "sample_sizes": [50],
    "replications": 7,
    "methods": ["Lyddon", "GPC"],
    "alpha": 0.1,
    "gpc": {"B": 20, "eta0": 0.5, "k0": 2.0, "step_exponent": 0.6,
            "max_iter": 9, "eta_min": 0.02, "eta_max": 4.0, "stop_tol": 0.01,
            "fresh_pool": true},
    "safebayes_grid": [0.25, 0.5, 1.0],
    "posterior_draws": 500,
    "base_seed": 99,
    "workers": 2,
    "out_path": "x.csv"
  })");
  CHECK(full.degrees == std::vector<int>{2});
  CHECK(full.replications == 7);
  CHECK(full.methods == std::vector<Method>{Method::Lyddon, Method::Gpc});
  CHECK(full.alpha == 0.1);
  CHECK(full.gpc.B == 20);
  CHECK(full.gpc.eta0 == 0.5);
  CHECK(full.gpc.max_iter == 9);
  CHECK(full.gpc.alpha == 0.1);  // nominal level propagates into the selector
  CHECK(full.gpc.fresh_pool == true);
  CHECK(full.safebayes_grid == std::vector<double>{0.25, 0.5, 1.0});
  CHECK(full.posterior_draws == 500);
  CHECK(full.base_seed == 99);
  CHECK(full.workers == 2);
  CHECK(full.out_path == "x.csv");
}

TEST_CASE("config parsing: unknown keys and invalid values are rejected") {
  CHECK_THROWS_AS(parse_config("not json"), ConfigError);
  CHECK_THROWS_AS(parse_config("[1,2]"), ConfigError);
  CHECK_THROWS_AS(parse_config("{}"), ConfigError);  // experiment required
  CHECK_THROWS_AS(parse_config(R"({"experiment": "toy"})"), ConfigError);
  CHECK_THROWS_AS(
      parse_config(R"({"experiment": "toy_curve", "replicatoins": 5})"),
      ConfigError);
  CHECK_THROWS_AS(
      parse_config(R"({"experiment": "toy_curve", "gpc": {"BB": 10}})"),
      ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"experiment": "toy_curve", "gpc": 3})"),
                  ConfigError);
  CHECK_THROWS_AS(
      parse_config(R"({"experiment": "toy_curve", "gpc": {"fresh_pool": 1}})"),
      ConfigError);
  CHECK_THROWS_AS(
      parse_config(R"({"experiment": "toy_curve", "degrees": ["a"]})"),
      ConfigError);
  CHECK_THROWS_AS(
      parse_config(R"({"experiment": "toy_curve", "replications": 0})"),
      ConfigError);
  CHECK_THROWS_AS(
      parse_config(R"({"experiment": "toy_curve", "degrees": []})"), ConfigError);
  CHECK_THROWS_AS(
      parse_config(R"({"experiment": "toy_curve", "degrees": [11]})"),
      ConfigError);
  CHECK_THROWS_AS(
      parse_config(R"({"experiment": "linear_dependent", "degrees": [4]})"),
      ConfigError);
  CHECK_THROWS_AS(
      parse_config(R"({"experiment": "toy_curve", "sample_sizes": [1]})"),
      ConfigError);
  CHECK_THROWS_AS(
      parse_config(R"({"experiment": "toy_curve", "methods": []})"), ConfigError);
  CHECK_THROWS_AS(
      parse_config(R"({"experiment": "toy_curve", "methods": ["GPC", "GPC"]})"),
      ConfigError);
  CHECK_THROWS_AS(
      parse_config(R"({"experiment": "gibbs_mcid", "methods": ["Lyddon"]})"),
      ConfigError);
  CHECK_THROWS_AS(
      parse_config(R"({"experiment": "gibbs_mcid", "methods": ["HolmesWalker"]})"),
      ConfigError);
  CHECK_THROWS_AS(
      parse_config(R"({"experiment": "toy_curve", "alpha": 1.5})"), ConfigError);
  CHECK_THROWS_AS(
      parse_config(R"({"experiment": "toy_curve", "safebayes_grid": []})"),
      ConfigError);
  CHECK_THROWS_AS(
      parse_config(R"({"experiment": "toy_curve", "safebayes_grid": [0.5, -1]})"),
      ConfigError);
  CHECK_THROWS_AS(
      parse_config(R"({"experiment": "toy_curve", "posterior_draws": 50})"),
      ConfigError);
  CHECK_THROWS_AS(
      parse_config(R"({"experiment": "toy_curve", "workers": 0})"), ConfigError);
  CHECK_THROWS_AS(
      parse_config(R"({"experiment": "toy_curve", "out_path": ""})"), ConfigError);
  CHECK_THROWS_AS(
      parse_config(
          R"({"experiment": "toy_curve", "gpc": {"eta_min": 2.0, "eta_max": 1.0}})"),
      ConfigError);
  CHECK_THROWS_AS(load_config((temp_root() / "missing.json").string()), ConfigError);
}

TEST_CASE("record formatting: round trip and byte stability") {
  ReplicationRecord r = make_record(3, 200, "GPC", 17, 0.53, 1, 0.0123, 0.4,
                                    kNan, 0);
  r.seed_path = "1/3/200/17";
  r.wall_ms = 12.5;

  const std::string line = format_record(r);
  CHECK(line == format_record(r));  // formatting is a pure function
  const ReplicationRecord back = parse_record(line, 2);
  CHECK(records_equal_mod_wall(back, r));
  CHECK(back.wall_ms == r.wall_ms);
  CHECK(std::isnan(back.interval_length));

  // Shortest-round-trip formatting: clean decimals stay clean.
  CHECK(line.find("0.53") != std::string::npos);
  CHECK(line.find("nan") != std::string::npos);

  CHECK(std::string(kCsvHeader) ==
        "experiment,degree,n,method,rep,eta_hat,covered,mse,avg_marginal_var,"
        "interval_length,degenerate,seed_path,wall_ms");
}

TEST_CASE("record files: strict reading reports offending line numbers") {
  const std::string good = format_record(
      make_record(1, 100, "GPC", 0, 0.5, 1, 0.01, 0.2, 0.3, 0));

  CHECK_THROWS_AS(parse_record("a,b,c", 5), CsvError);
  try {
    parse_record("a,b,c", 5);
  } catch (const CsvError& e) {
    CHECK(e.line == 5);
    CHECK(std::string(e.what()).find("line 5") != std::string::npos);
    CHECK(std::string(e.what()).find("13 fields") != std::string::npos);
  }
  CHECK_THROWS_AS(
      parse_record("toy_curve,x,100,GPC,0,0.5,1,0.01,0.2,0.3,0,s,1", 2), CsvError);
  CHECK_THROWS_AS(
      parse_record("toy_curve,1,100,GPC,0,zz,1,0.01,0.2,0.3,0,s,1", 2), CsvError);
  CHECK_THROWS_AS(
      parse_record("toy_curve,1,100,GPC,0,0.5,2,0.01,0.2,0.3,0,s,1", 2), CsvError);
  CHECK_THROWS_AS(
      parse_record("toy_curve,1,100,GPC,0,0.5,1,0.01,0.2,0.3,7,s,1", 2), CsvError);

  const fs::path ok_path = temp_root() / "ok.csv";
  spit(ok_path, std::string(kCsvHeader) + "\n" + good + "\n" + good + "\n");
  CHECK(read_records(ok_path.string()).size() == 2);

  const fs::path bad_header = temp_root() / "bad_header.csv";
  spit(bad_header, "nope\n" + good + "\n");
  try {
    read_records(bad_header.string());
    FAIL("expected a header error");
  } catch (const CsvError& e) {
    CHECK(e.line == 1);
  }

  const fs::path bad_middle = temp_root() / "bad_middle.csv";
  spit(bad_middle, std::string(kCsvHeader) + "\n" + good + "\nbroken,line\n" +
                       good + "\n");
  try {
    read_records(bad_middle.string());
    FAIL("expected a parse error");
  } catch (const CsvError& e) {
    CHECK(e.line == 3);
  }

  const fs::path untermin = temp_root() / "unterminated.csv";
  spit(untermin, std::string(kCsvHeader) + "\n" + good);
  CHECK_THROWS_AS(read_records(untermin.string()), CsvError);

  CHECK_THROWS_AS(read_records((temp_root() / "absent.csv").string()), CsvError);
}

TEST_CASE("record files: resume reader drops only a damaged tail") {
  const std::string l1 = format_record(
      make_record(1, 100, "GPC", 0, 0.5, 1, 0.01, 0.2, 0.3, 0));
  const std::string l2 = format_record(
      make_record(1, 100, "GPC", 1, 0.6, 0, 0.02, 0.3, 0.4, 0));
  const std::string header(kCsvHeader);

  // Intact file: everything read, nothing dropped.
  const fs::path whole = temp_root() / "whole.csv";
  spit(whole, header + "\n" + l1 + "\n" + l2 + "\n");
  const ResumeReadResult all = read_records_for_resume(whole.string());
  CHECK(all.records.size() == 2);
  CHECK(all.dropped_partial_tail == false);
  CHECK(all.clean_prefix_bytes == fs::file_size(whole));

  // Crash mid-line: the partial tail goes, the prefix stays.
  const fs::path torn = temp_root() / "torn.csv";
  const std::string prefix = header + "\n" + l1 + "\n";
  spit(torn, prefix + l2.substr(0, 20));
  const ResumeReadResult cut = read_records_for_resume(torn.string());
  CHECK(cut.records.size() == 1);
  CHECK(cut.records[0].rep == 0);
  CHECK(cut.dropped_partial_tail == true);
  CHECK(cut.clean_prefix_bytes == prefix.size());

  // A terminated but malformed final line is also treated as tail damage.
  const fs::path torn2 = temp_root() / "torn2.csv";
  spit(torn2, prefix + "toy_curve,1,100,GPC,1,0.6,0,0.02\n");
  const ResumeReadResult cut2 = read_records_for_resume(torn2.string());
  CHECK(cut2.records.size() == 1);
  CHECK(cut2.dropped_partial_tail == true);
  CHECK(cut2.clean_prefix_bytes == prefix.size());

  // Damage before the tail is a real error, not a resume point.
  const fs::path middle = temp_root() / "torn_middle.csv";
  spit(middle, header + "\nbroken\n" + l1 + "\n" + l2 + "\n");
  CHECK_THROWS_AS(read_records_for_resume(middle.string()), CsvError);
}

TEST_CASE("replication runner: field contract and method-subset identity") {
  ExperimentConfig cfg = small_toy_config("unused.csv");
  cfg.degrees = {5};
  cfg.sample_sizes = {60};
  cfg.methods = {Method::Gpc, Method::SafeBayes, Method::HolmesWalker,
                 Method::Lyddon};

  const std::vector<ReplicationRecord> recs = run_replication(cfg, 5, 60, 3);
  REQUIRE(recs.size() == 4);
  const char* names[4] = {"GPC", "SafeBayes", "HolmesWalker", "Lyddon"};
  for (std::size_t i = 0; i < 4; ++i) {
    const ReplicationRecord& r = recs[i];
    CHECK(r.experiment == "toy_curve");
    CHECK(r.degree == 5);
    CHECK(r.n == 60);
    CHECK(r.rep == 3);
    CHECK(r.method == names[i]);
    CHECK(r.degenerate == 0);
    CHECK(std::isfinite(r.eta_hat));
    CHECK(r.eta_hat > 0.0);
    CHECK((r.covered == 0 || r.covered == 1));
    CHECK(std::isfinite(r.mse));
    CHECK(r.mse >= 0.0);
    CHECK(r.avg_marginal_var > 0.0);
    CHECK(r.interval_length > 0.0);  // scalar target: interval region
    CHECK(r.seed_path == "0/5/60/3");
    CHECK(r.wall_ms >= 0.0);
  }

  // Method streams are keyed by method id, so a subset run reproduces the
  // full run's records bit for bit.
  for (std::size_t i = 0; i < 4; ++i) {
    ExperimentConfig sub = cfg;
    sub.methods = {static_cast<Method>(i)};
    const std::vector<ReplicationRecord> one = run_replication(sub, 5, 60, 3);
    REQUIRE(one.size() == 1);
    CHECK(records_equal_mod_wall(one[0], recs[i]));
  }
}

TEST_CASE("experiment runner: row counts, determinism, worker independence") {
  ExperimentConfig cfg = small_toy_config("full_a.csv");
  const RunResult res = run_experiment(cfg);
  CHECK(res.rows_written == 24);  // 2 degrees x 2 sizes x 3 reps x 2 methods
  CHECK(res.rows_skipped == 0);
  CHECK(res.total_rows == 24);
  CHECK(res.degenerate_rows == 0);

  const std::vector<ReplicationRecord> a = read_records(cfg.out_path);
  REQUIRE(a.size() == 24);

  // Canonical order: configured degree, size, replication, method order.
  std::size_t idx = 0;
  for (int degree : {2, 5})
    for (int n : {40, 80})
      for (int rep = 0; rep < 3; ++rep)
        for (const char* m : {"Lyddon", "HolmesWalker"}) {
          CHECK(a[idx].degree == degree);
          CHECK(a[idx].n == n);
          CHECK(a[idx].rep == rep);
          CHECK(a[idx].method == m);
          ++idx;
        }

  // Re-running the same config is deterministic up to wall time.
  ExperimentConfig cfg_b = small_toy_config("full_b.csv");
  run_experiment(cfg_b);
  const std::vector<ReplicationRecord> b = read_records(cfg_b.out_path);
  REQUIRE(b.size() == a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    CHECK(records_equal_mod_wall(a[i], b[i]));

  // Scheduling over four workers must not change a byte of the payload.
  ExperimentConfig cfg_c = small_toy_config("full_c.csv");
  cfg_c.workers = 4;
  run_experiment(cfg_c);
  const std::vector<ReplicationRecord> c = read_records(cfg_c.out_path);
  REQUIRE(c.size() == a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    CHECK(records_equal_mod_wall(a[i], c[i]));

  CHECK_THROWS_AS(run_experiment(ExperimentConfig{}), ConfigError);
}

TEST_CASE("experiment runner: resume reproduces the uninterrupted file") {
  ExperimentConfig full_cfg = small_toy_config("resume_full.csv");
  run_experiment(full_cfg);
  const std::vector<ReplicationRecord> want = read_records(full_cfg.out_path);
  const std::string full_text = slurp(full_cfg.out_path);

  // Cut the file mid-record as a crash would, then resume.
  std::vector<std::size_t> line_starts;
  for (std::size_t pos = 0; pos < full_text.size(); ++pos)
    if (full_text[pos] == '\n') line_starts.push_back(pos + 1);
  // line_starts[k] is the byte offset of data record k (header is line 1).
  ExperimentConfig torn_cfg = small_toy_config("resume_torn.csv");
  spit(torn_cfg.out_path, full_text.substr(0, line_starts[10] + 25));
  const RunResult torn_res = run_experiment(torn_cfg, true);
  CHECK(torn_res.rows_skipped == 10);
  CHECK(torn_res.rows_written == 14);
  CHECK(torn_res.total_rows == 24);
  const std::vector<ReplicationRecord> torn = read_records(torn_cfg.out_path);
  REQUIRE(torn.size() == want.size());
  for (std::size_t i = 0; i < want.size(); ++i)
    CHECK(records_equal_mod_wall(torn[i], want[i]));

  // A clean cut inside a replication's method block also resumes in order.
  ExperimentConfig half_cfg = small_toy_config("resume_half.csv");
  spit(half_cfg.out_path, full_text.substr(0, line_starts[11]));
  const RunResult half_res = run_experiment(half_cfg, true);
  CHECK(half_res.rows_skipped == 11);
  CHECK(half_res.rows_written == 13);
  const std::vector<ReplicationRecord> half = read_records(half_cfg.out_path);
  REQUIRE(half.size() == want.size());
  for (std::size_t i = 0; i < want.size(); ++i)
    CHECK(records_equal_mod_wall(half[i], want[i]));

  // Resuming a finished run computes nothing and rewrites nothing.
  ExperimentConfig done_cfg = small_toy_config("resume_done.csv");
  spit(done_cfg.out_path, full_text);
  const RunResult done_res = run_experiment(done_cfg, true);
  CHECK(done_res.rows_written == 0);
  CHECK(done_res.rows_skipped == 24);
  CHECK(slurp(done_cfg.out_path) == full_text);

  // Resume over a file from a different experiment is refused.
  ExperimentConfig wrong = small_toy_config("resume_done.csv");
  wrong.experiment = Experiment::LinearDependent;
  wrong.degrees = {1};
  CHECK_THROWS_AS(run_experiment(wrong, true), ConfigError);

  // Resume with no existing file is an ordinary fresh run.
  ExperimentConfig fresh = small_toy_config("resume_fresh.csv");
  const RunResult fresh_res = run_experiment(fresh, true);
  CHECK(fresh_res.rows_written == 24);
  CHECK(fresh_res.rows_skipped == 0);
}

TEST_CASE("summaries: grouped means, exclusions, and ordering") {
  // Single covered record: coverage 1 with zero standard error.
  {
    const SummaryTable t =
        summarize({make_record(1, 100, "GPC", 0, 0.5, 1, 0.02, 0.1, 0.3, 0)});
    REQUIRE(t.rows.size() == 1);
    CHECK(t.rows[0].coverage == 1.0);
    CHECK(t.rows[0].se_coverage == 0.0);
    CHECK(t.rows[0].se_eta_hat == 0.0);
    CHECK(t.rows[0].total == 1);
    CHECK(t.rows[0].used == 1);
  }

  // Two records: plain means and the textbook standard error.
  {
    const SummaryTable t = summarize({
        make_record(1, 100, "GPC", 0, 0.4, 1, 0.02, 0.1, 0.3, 0),
        make_record(1, 100, "GPC", 1, 0.6, 0, 0.04, 0.3, 0.5, 0),
    });
    REQUIRE(t.rows.size() == 1);
    const SummaryRow& r = t.rows[0];
    CHECK(r.mean_eta_hat == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(r.mean_mse == doctest::Approx(0.03).epsilon(1e-12));
    CHECK(r.se_mse == doctest::Approx(0.01).epsilon(1e-12));
    CHECK(r.coverage == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(r.se_coverage == doctest::Approx(std::sqrt(0.25 / 2)).epsilon(1e-12));
    CHECK(r.mean_length == doctest::Approx(0.4).epsilon(1e-12));
  }

  // Degenerate rows drop out of every average but stay in the counts.
  {
    ReplicationRecord dead = make_record(1, 100, "GPC", 2, kNan, 0, kNan, kNan,
                                         kNan, 1);
    const SummaryTable t = summarize({
        make_record(1, 100, "GPC", 0, 0.4, 1, 0.02, 0.1, 0.3, 0),
        make_record(1, 100, "GPC", 1, 0.6, 1, 0.04, 0.3, 0.5, 0),
        dead,
    });
    REQUIRE(t.rows.size() == 1);
    CHECK(t.rows[0].total == 3);
    CHECK(t.rows[0].used == 2);
    CHECK(t.rows[0].excluded == 1);
    CHECK(t.rows[0].coverage == 1.0);
    CHECK(t.rows[0].mean_eta_hat == doctest::Approx(0.5).epsilon(1e-12));

    const SummaryTable all_dead = summarize({dead});
    CHECK(all_dead.rows[0].used == 0);
    CHECK(std::isnan(all_dead.rows[0].coverage));
    CHECK(std::isnan(all_dead.rows[0].mean_eta_hat));
  }

  // NaN metrics (ellipsoid cells have no interval length) are skipped
  // without contaminating the rest of the row.
  {
    const SummaryTable t = summarize({
        make_record(1, 100, "GPC", 0, 0.4, 1, 0.02, 0.1, kNan, 0),
        make_record(1, 100, "GPC", 1, 0.6, 1, 0.04, 0.3, kNan, 0),
    });
    CHECK(std::isnan(t.rows[0].mean_length));
    CHECK(t.rows[0].mean_variance == doctest::Approx(0.2).epsilon(1e-12));
  }

  // Rows come out sorted by degree, then n, then canonical method order.
  {
    const SummaryTable t = summarize({
        make_record(2, 100, "Lyddon", 0, 1.0, 1, 0.01, 0.1, 0.2, 0),
        make_record(1, 200, "GPC", 0, 1.0, 1, 0.01, 0.1, 0.2, 0),
        make_record(1, 100, "Lyddon", 0, 1.0, 1, 0.01, 0.1, 0.2, 0),
        make_record(1, 100, "GPC", 0, 1.0, 1, 0.01, 0.1, 0.2, 0),
        make_record(1, 100, "SafeBayes", 0, 1.0, 1, 0.01, 0.1, 0.2, 0),
    });
    REQUIRE(t.rows.size() == 5);
    CHECK(t.rows[0].method == "GPC");
    CHECK(t.rows[1].method == "SafeBayes");
    CHECK(t.rows[2].method == "Lyddon");
    CHECK(t.rows[0].n == 100);
    CHECK(t.rows[3].n == 200);
    CHECK(t.rows[4].degree == 2);
  }
}

TEST_CASE("summaries: renderings carry the right columns") {
  const std::vector<ReplicationRecord> interval_recs = {
      make_record(5, 80, "GPC", 0, 0.5, 1, 0.02, 0.1, 0.3, 0),
      make_record(5, 80, "Lyddon", 0, 0.52, 1, 0.03, 0.2, 0.4, 0),
  };
  const SummaryTable with_length = summarize(interval_recs);
  const std::string md = to_markdown(with_length);
  CHECK(md.find("| Length |") != std::string::npos);
  CHECK(md.find("| 5 | 80 | GPC |") != std::string::npos);

  const SummaryTable no_length = summarize({
      make_record(1, 100, "GPC", 0, 0.5, 1, 0.02, 0.1, kNan, 0),
  });
  CHECK(to_markdown(no_length).find("| Variance |") != std::string::npos);

  const std::string csv = to_csv(with_length);
  CHECK(csv.rfind("experiment,degree,n,method,total,used,excluded,", 0) == 0);
  CHECK(csv.find("toy_curve,5,80,GPC,") != std::string::npos);

  const std::string toy = toy_curve_csv(with_length);
  CHECK(toy.rfind("eta_star,n,method,", 0) == 0);
  CHECK(toy.find("0.50,80,GPC,") != std::string::npos);

  // File-level aggregation equals in-memory aggregation.
  const fs::path p = temp_root() / "summ.csv";
  std::string text = std::string(kCsvHeader) + "\n";
  for (const ReplicationRecord& r : interval_recs) text += format_record(r) + "\n";
  spit(p, text);
  CHECK(to_csv(summarize_file(p.string())) == csv);
}

TEST_CASE("experiment wiring: models, dgps, and the mismatch grid") {
  CHECK(toy_eta_star(5) == 0.5);
  CHECK(toy_eta_star(10) == 1.0);
  CHECK_THROWS_AS(toy_eta_star(0), std::invalid_argument);
  CHECK_THROWS_AS(toy_eta_star(11), std::invalid_argument);

  CHECK(make_model(Experiment::ToyCurve)->dim() == 1);
  CHECK(make_model(Experiment::LinearDependent)->dim() == 5);
  CHECK(make_model(Experiment::LinearT)->dim() == 5);
  CHECK(make_model(Experiment::LogisticMcid)->dim() == 2);
  CHECK(make_model(Experiment::GibbsMcid)->dim() == 1);
  CHECK(!make_model(Experiment::GibbsMcid)->differentiable());

  // Toy degree d: variance mismatch eta* = d/10, i.e. sigma* = 1/sqrt(eta*).
  const std::unique_ptr<Dgp> toy = make_dgp(Experiment::ToyCurve, 4);
  CHECK(toy->true_target()[0] == 0.0);
  RandomStream stream(7100, {1});
  const Dataset sample = toy->generate(20000, stream);
  const double s2 = (sample.y.array() - sample.y.mean()).square().sum() / 2e4;
  CHECK(std::abs(s2 - 2.5) < 3.0 * std::sqrt(2.0 * 2.5 * 2.5 / 2e4));

  CHECK((make_dgp(Experiment::LinearDependent, 1)->true_target() -
         regression_coefficients())
            .norm() == 0.0);
  CHECK((make_dgp(Experiment::LinearT, 2)->true_target() -
         regression_coefficients())
            .norm() == 0.0);

  // The two MCID experiments judge different targets of the same mixture.
  const double gibbs_target = make_dgp(Experiment::GibbsMcid, 1)->true_target()[0];
  const double logit_target =
      make_dgp(Experiment::LogisticMcid, 1)->true_target()[0];
  CHECK(gibbs_target > 5.4);
  CHECK(gibbs_target < 5.6);
  CHECK(std::abs(gibbs_target - logit_target) > 0.01);
}

TEST_CASE("command line: exit codes, seed override, and summaries") {
  const fs::path cli = find_cli();
  if (cli.empty()) {
    MESSAGE("command-line binary not found next to the test binary; skipping");
    return;
  }
  const std::string bin = cli.string();

  // Deterministic draw printout, with the environment seed taking priority.
  const CommandResult seeded =
      run_command("GBCAL_BASE_SEED=777 " + bin + " seed-check");
  CHECK(seeded.exit_code == 0);
  CHECK(seeded.output.find("base_seed 777") != std::string::npos);
  const CommandResult seeded2 =
      run_command("GBCAL_BASE_SEED=777 " + bin + " seed-check");
  CHECK(seeded2.output == seeded.output);
  const CommandResult bad_seed =
      run_command("GBCAL_BASE_SEED=xyz " + bin + " seed-check");
  CHECK(bad_seed.exit_code == 2);

  // Config errors exit with 2.
  const fs::path bad_cfg = temp_root() / "bad.json";
  spit(bad_cfg, R"({"experiment": "nope"})");
  CHECK(run_command(bin + " run --config " + bad_cfg.string()).exit_code == 2);
  CHECK(run_command(bin + " run --config " + (temp_root() / "ghost.json").string())
            .exit_code == 2);

  // A clean tiny run exits 0 and its records summarize.
  const fs::path run_cfg = temp_root() / "tiny.json";
  const fs::path run_out = temp_root() / "tiny.csv";
  spit(run_cfg, std::string(R"({"experiment": "toy_curve", "degrees": [5],
    "sample_sizes": [40], "replications": 2, "methods": ["Lyddon"],
    "out_path": ")") + run_out.string() + "\"}");
  CHECK(run_command(bin + " run --config " + run_cfg.string()).exit_code == 0);
  CHECK(read_records(run_out.string()).size() == 2);

  const CommandResult md = run_command(bin + " summarize " + run_out.string());
  CHECK(md.exit_code == 0);
  CHECK(md.output.find("| Degree |") != std::string::npos);
  const CommandResult csv =
      run_command(bin + " summarize " + run_out.string() + " --format csv");
  CHECK(csv.exit_code == 0);
  CHECK(csv.output.rfind("experiment,", 0) == 0);

  // The toy sweep subcommand prints the tidy curve.
  const fs::path toy_cfg = temp_root() / "toy.json";
  const fs::path toy_out = temp_root() / "toy.csv";
  spit(toy_cfg, std::string(R"({"experiment": "toy_curve", "degrees": [10],
    "sample_sizes": [50], "replications": 2, "methods": ["HolmesWalker"],
    "out_path": ")") + toy_out.string() + "\"}");
  const CommandResult toy = run_command(bin + " toy-curve --config " + toy_cfg.string());
  CHECK(toy.exit_code == 0);
  CHECK(toy.output.rfind("eta_star,n,method,", 0) == 0);
  CHECK(toy.output.find("1.00,50,HolmesWalker,") != std::string::npos);
}
