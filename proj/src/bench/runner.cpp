#include "gbcal/bench/runner.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <set>
#include <thread>

#include "gbcal/lrate/select.hpp"
#include "gbcal/models/gaussian_location.hpp"
#include "gbcal/models/gibbs_mcid.hpp"
#include "gbcal/models/linear_regression.hpp"
#include "gbcal/models/logistic_mcid.hpp"
#include "gbcal/uq/metrics.hpp"

namespace gbcal {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Stream-path labels hanging off the per-replication root; method labels
// are keyed by the method id so that running a subset of methods reproduces
// the full run's records exactly.
constexpr std::uint64_t kDataLabel = 1;
constexpr std::uint64_t kSelectBase = 2;    // + method id
constexpr std::uint64_t kPosteriorBase = 16;  // + method id

ScalarTarget scalar_target(Experiment e) {
  switch (e) {
    case Experiment::LogisticMcid:
      return [](const Eigen::VectorXd& th) { return -th[0] / th[1]; };
    case Experiment::ToyCurve:
    case Experiment::GibbsMcid:
      return [](const Eigen::VectorXd& th) { return th[0]; };
    default:
      return {};
  }
}

RegionBuilder region_builder(const ExperimentConfig& cfg) {
  const Experiment e = cfg.experiment;
  if (e == Experiment::LinearDependent || e == Experiment::LinearT) {
    const int M = cfg.posterior_draws;
    return [M](const PosteriorHandle& h, double level) {
      return hpd_ellipsoid(h, level, M);
    };
  }
  const ScalarTarget target = scalar_target(e);
  return [target](const PosteriorHandle& h, double level) {
    return hpd_interval(h, level, target);
  };
}

// Maps the fitted parameter vector to the coordinates coverage is judged
// in: the beta block for the regressions, the threshold for the MCID
// models, the location itself for the toy.
TargetExtractor target_extractor(Experiment e) {
  switch (e) {
    case Experiment::LinearDependent:
    case Experiment::LinearT:
      return [](const Eigen::VectorXd& th) -> Eigen::VectorXd {
        return th.head(th.size() - 1);
      };
    case Experiment::LogisticMcid:
      return [](const Eigen::VectorXd& th) -> Eigen::VectorXd {
        Eigen::VectorXd v(1);
        v[0] = -th[0] / th[1];
        return v;
      };
    default:
      return [](const Eigen::VectorXd& th) -> Eigen::VectorXd { return th; };
  }
}

ReplicationRecord blank_record(const ExperimentConfig& cfg, int degree, int n,
                               int rep, Method m) {
  ReplicationRecord r;
  r.experiment = experiment_name(cfg.experiment);
  r.degree = degree;
  r.n = n;
  r.method = method_name(m);
  r.rep = rep;
  r.eta_hat = kNaN;
  r.covered = 0;
  r.mse = kNaN;
  r.avg_marginal_var = kNaN;
  r.interval_length = kNaN;
  r.degenerate = 0;
  r.seed_path = std::to_string(static_cast<int>(cfg.experiment)) + "/" +
                std::to_string(degree) + "/" + std::to_string(n) + "/" +
                std::to_string(rep);
  r.wall_ms = 0.0;
  return r;
}

std::vector<ReplicationRecord> run_replication_masked(
    const ExperimentConfig& cfg, int degree, int n, int rep,
    const std::vector<Method>& wanted) {
  const std::uint64_t exp_id = static_cast<std::uint64_t>(cfg.experiment);
  const RandomStream root(cfg.base_seed,
                          {exp_id, static_cast<std::uint64_t>(degree),
                           static_cast<std::uint64_t>(n),
                           static_cast<std::uint64_t>(rep)});

  const std::unique_ptr<Dgp> dgp = make_dgp(cfg.experiment, degree);
  RandomStream data_stream = root.child(kDataLabel);
  const Dataset data = dgp->generate(n, data_stream);
  const Eigen::VectorXd truth = dgp->true_target();

  const std::unique_ptr<Model> model = make_model(cfg.experiment);
  const RegionBuilder builder = region_builder(cfg);
  const TargetExtractor extractor = target_extractor(cfg.experiment);
  const ScalarTarget target = scalar_target(cfg.experiment);
  const double level = 1.0 - cfg.alpha;

  GpcConfig gpc_cfg = cfg.gpc;
  gpc_cfg.alpha = cfg.alpha;

  FitResult fit;
  bool fit_failed = false;
  try {
    fit = model->mle(data);
  } catch (const std::exception&) {
    fit_failed = true;
  }

  std::vector<ReplicationRecord> out;
  out.reserve(wanted.size());
  for (Method m : wanted) {
    const auto t0 = std::chrono::steady_clock::now();
    ReplicationRecord rec = blank_record(cfg, degree, n, rep, m);
    const std::uint64_t mid = static_cast<std::uint64_t>(m);
    try {
      if (fit_failed || fit.degenerate)
        throw std::runtime_error("point estimate is degenerate");
      LearningRateResult lr;
      switch (m) {
        case Method::Gpc:
          lr = gpc_select(*model, data, builder, extractor, gpc_cfg,
                          root.child(kSelectBase + mid));
          break;
        case Method::SafeBayes:
          lr = safebayes_select(*model, data, cfg.safebayes_grid,
                                root.child(kSelectBase + mid));
          break;
        case Method::HolmesWalker:
          lr = holmes_walker_select(*model, data, 2000,
                                    root.child(kSelectBase + mid));
          break;
        case Method::Lyddon: {
          LyddonOptions opt;
          opt.beta_only = cfg.experiment == Experiment::LinearDependent ||
                          cfg.experiment == Experiment::LinearT;
          lr = lyddon_select(*model, data, opt);
          break;
        }
      }
      rec.eta_hat = lr.eta_hat;
      const PosteriorHandle post =
          model->posterior(data, lr.eta_hat, root.child(kPosteriorBase + mid));
      if (post.degenerate) throw std::runtime_error("posterior is degenerate");
      const CredibleRegion region = builder(post, level);
      replication_metrics(post, region, truth, &rec, target);
    } catch (const std::exception&) {
      rec.degenerate = 1;
      rec.covered = 0;
      rec.mse = kNaN;
      rec.avg_marginal_var = kNaN;
      rec.interval_length = kNaN;
    }
    rec.wall_ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
    out.push_back(std::move(rec));
  }
  return out;
}

}  // namespace

std::unique_ptr<Model> make_model(Experiment e) {
  switch (e) {
    case Experiment::ToyCurve:
      return std::make_unique<GaussianLocationModel>(1.0);
    case Experiment::LinearDependent:
    case Experiment::LinearT:
      return std::make_unique<LinearRegressionModel>(4);
    case Experiment::LogisticMcid:
      return std::make_unique<LogisticMcidModel>();
    case Experiment::GibbsMcid:
      return std::make_unique<GibbsMcidModel>();
  }
  throw std::logic_error("unreachable");
}

std::unique_ptr<Dgp> make_dgp(Experiment e, int degree) {
  switch (e) {
    case Experiment::ToyCurve:
      return std::make_unique<ToyDgp>(0.0, 1.0 / std::sqrt(toy_eta_star(degree)));
    case Experiment::LinearDependent:
      return std::make_unique<DependentErrorsDgp>(degree);
    case Experiment::LinearT:
      return std::make_unique<TErrorsDgp>(degree);
    case Experiment::LogisticMcid:
      return std::make_unique<MixtureLogisticDgp>(
          degree, MixtureLogisticDgp::Target::LogisticProjection);
    case Experiment::GibbsMcid:
      return std::make_unique<MixtureLogisticDgp>(
          degree, MixtureLogisticDgp::Target::McidRoot);
  }
  throw std::logic_error("unreachable");
}

double toy_eta_star(int degree) {
  if (degree < 1 || degree > 10)
    throw std::invalid_argument("toy degree must lie in 1..10");
  return degree / 10.0;
}

std::vector<ReplicationRecord> run_replication(const ExperimentConfig& cfg,
                                               int degree, int n, int rep) {
  return run_replication_masked(cfg, degree, n, rep, cfg.methods);
}

RunResult run_experiment(const ExperimentConfig& cfg, bool resume) {
  validate_config(cfg);
  namespace fs = std::filesystem;

  struct Task {
    int degree, n, rep;
    std::vector<Method> missing;
  };

  RunResult result;
  std::set<std::tuple<int, int, int, std::string>> present;
  bool fresh = true;

  if (resume && fs::exists(cfg.out_path)) {
    ResumeReadResult existing = read_records_for_resume(cfg.out_path);
    for (const ReplicationRecord& r : existing.records) {
      if (r.experiment != experiment_name(cfg.experiment))
        throw ConfigError("records file '" + cfg.out_path + "' belongs to '" +
                          r.experiment + "'");
      present.insert({r.degree, r.n, r.rep, r.method});
      if (r.degenerate) ++result.degenerate_rows;
    }
    result.rows_skipped = existing.records.size();
    if (existing.dropped_partial_tail)
      fs::resize_file(cfg.out_path, existing.clean_prefix_bytes);
    fresh = false;
  }

  std::vector<Task> tasks;
  for (int degree : cfg.degrees)
    for (int n : cfg.sample_sizes)
      for (int rep = 0; rep < cfg.replications; ++rep) {
        Task t{degree, n, rep, {}};
        for (Method m : cfg.methods)
          if (!present.count({degree, n, rep, method_name(m)}))
            t.missing.push_back(m);
        if (!t.missing.empty()) tasks.push_back(std::move(t));
      }

  std::ofstream out(cfg.out_path,
                    fresh ? std::ios::trunc : (std::ios::app | std::ios::ate));
  if (!out) throw ConfigError("cannot open output file '" + cfg.out_path + "'");
  if (fresh) out << kCsvHeader << '\n' << std::flush;

  const auto write_task = [&](const std::vector<ReplicationRecord>& recs) {
    for (const ReplicationRecord& r : recs) {
      out << format_record(r) << '\n';
      ++result.rows_written;
      if (r.degenerate) ++result.degenerate_rows;
    }
    out.flush();
  };

  const std::size_t T = tasks.size();
  const int workers = std::min<std::size_t>(static_cast<std::size_t>(cfg.workers),
                                            std::max<std::size_t>(T, 1));
  if (workers <= 1) {
    for (const Task& t : tasks)
      write_task(run_replication_masked(cfg, t.degree, t.n, t.rep, t.missing));
  } else {
    std::atomic<std::size_t> next{0};
    std::mutex mu;
    std::condition_variable cv;
    std::map<std::size_t, std::vector<ReplicationRecord>> done;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        while (true) {
          const std::size_t i = next.fetch_add(1);
          if (i >= T) return;
          const Task& t = tasks[i];
          auto recs = run_replication_masked(cfg, t.degree, t.n, t.rep, t.missing);
          {
            std::lock_guard<std::mutex> lk(mu);
            done.emplace(i, std::move(recs));
          }
          cv.notify_one();
        }
      });
    // Single in-order writer: output bytes cannot depend on scheduling.
    for (std::size_t i = 0; i < T; ++i) {
      std::vector<ReplicationRecord> recs;
      {
        std::unique_lock<std::mutex> lk(mu);
        cv.wait(lk, [&] { return done.count(i) > 0; });
        recs = std::move(done.at(i));
        done.erase(i);
      }
      write_task(recs);
    }
    for (std::thread& th : pool) th.join();
  }

  result.total_rows = result.rows_written + result.rows_skipped;
  return result;
}

}  // namespace gbcal
