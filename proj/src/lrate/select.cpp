#include "gbcal/lrate/select.hpp"

#include <cmath>

namespace gbcal {

SandwichEstimates estimate_sandwich(const Model& model, const Dataset& data) {
  const FitResult fit = model.mle(data);
  const int d = model.dim();
  SandwichEstimates sw;
  sw.theta_hat = fit.theta;
  sw.V_hat = Eigen::MatrixXd::Zero(d, d);
  sw.Lambda_hat = Eigen::MatrixXd::Zero(d, d);
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    const Eigen::VectorXd s = model.obs_score(fit.theta, data, i);
    sw.V_hat += model.obs_hessian(fit.theta, data, i);
    sw.Lambda_hat += s * s.transpose();
  }
  const double n = static_cast<double>(data.n());
  sw.V_hat /= n;
  sw.Lambda_hat /= n;
  return sw;
}

LearningRateResult lyddon_select(const Model& model, const Dataset& data,
                                 const LyddonOptions& options) {
  const SandwichEstimates sw = estimate_sandwich(model, data);
  Eigen::MatrixXd J = -sw.V_hat;
  Eigen::MatrixXd L = sw.Lambda_hat;
  if (options.beta_only) {
    const Eigen::Index d = J.rows() - 1;
    J = J.topLeftCorner(d, d).eval();
    L = L.topLeftCorner(d, d).eval();
  }

  LearningRateResult out;
  out.method = "lyddon";

  Eigen::LDLT<Eigen::MatrixXd> ldlt(L);
  Eigen::MatrixXd solved;
  bool ridged = false;
  if (ldlt.info() == Eigen::Success && ldlt.isPositive())
    solved = ldlt.solve(J);
  if (solved.size() == 0 || !solved.allFinite()) {
    Eigen::MatrixXd repaired = L;
    repaired.diagonal().array() +=
        1e-10 * L.trace() / static_cast<double>(L.rows());
    solved = repaired.ldlt().solve(J);
    ridged = true;
  }
  const double num = (J * solved).trace();
  const double den = J.trace();
  if (!(den > 0.0) || !std::isfinite(num))
    throw std::runtime_error("information matrix is not positive at theta_hat");
  out.eta_hat = num / den;
  out.diagnostics["trace_num"] = num;
  out.diagnostics["trace_den"] = den;
  out.diagnostics["ridged"] = ridged ? 1.0 : 0.0;
  return out;
}

std::vector<double> default_safebayes_grid() {
  std::vector<double> grid;
  for (int k = 1; k <= 20; ++k) grid.push_back(0.05 * k);
  return grid;
}

LearningRateResult safebayes_select(const Model& model, const Dataset& data,
                                    const std::vector<double>& grid,
                                    const RandomStream& stream) {
  if (grid.empty()) throw std::invalid_argument("empty learning-rate grid");
  LearningRateResult out;
  out.method = "safebayes";
  out.trace.reserve(grid.size());
  std::size_t best = grid.size();
  std::size_t excluded = 0;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const double obj = model.cumulative_predictive_negloglik(
        data, grid[g], stream.child(static_cast<std::uint64_t>(g)));
    out.trace.push_back(obj);
    if (!std::isfinite(obj)) {
      ++excluded;
      continue;
    }
    // Strict inequality: ties resolve to the smallest learning rate.
    if (best == grid.size() || obj < out.trace[best]) best = g;
  }
  if (best == grid.size())
    throw std::runtime_error("sequential log-loss objective is non-finite everywhere");
  out.eta_hat = grid[best];
  out.diagnostics["objective"] = out.trace[best];
  out.diagnostics["excluded_grid_points"] = static_cast<double>(excluded);
  return out;
}

LearningRateResult holmes_walker_select(const Model& model, const Dataset& data,
                                        int prior_draws,
                                        const RandomStream& stream) {
  const FitResult fit = model.mle(data);
  const Eigen::Index n = data.n();
  double num = 0.0, den = 0.0;

  if (!model.proper_prior()) {
    for (Eigen::Index i = 0; i < n; ++i) {
      num += model.expected_sq_score_norm(fit.theta, data, i, fit.theta);
      den += model.obs_score(fit.theta, data, i).squaredNorm();
    }
  } else {
    bool closed_form = true;
    try {
      num += model.prior_expected_sq_score_norm(data, 0, fit.theta);
      den += model.prior_sq_score_norm(data, 0);
    } catch (const UnsupportedOperation&) {
      closed_form = false;
      num = den = 0.0;
    }
    if (closed_form) {
      for (Eigen::Index i = 1; i < n; ++i) {
        num += model.prior_expected_sq_score_norm(data, i, fit.theta);
        den += model.prior_sq_score_norm(data, i);
      }
    } else {
      // Monte Carlo over the prior; the same draws serve numerator and
      // denominator so their errors largely cancel in the ratio.
      if (prior_draws < 1) throw std::invalid_argument("prior_draws must be positive");
      RandomStream prior_stream = stream.child(0);
      for (int t = 0; t < prior_draws; ++t) {
        const ParamVector theta = model.sample_prior(prior_stream);
        for (Eigen::Index i = 0; i < n; ++i) {
          num += model.expected_sq_score_norm(theta, data, i, fit.theta);
          den += model.obs_score(theta, data, i).squaredNorm();
        }
      }
    }
  }

  LearningRateResult out;
  out.method = "holmes_walker";
  if (!(den > 0.0)) throw std::runtime_error("degenerate empirical information");
  out.eta_hat = std::sqrt(num / den);
  out.diagnostics["numerator"] = num;
  out.diagnostics["denominator"] = den;
  return out;
}

LearningRateResult gpc_select(const Model& model, const Dataset& data,
                              const RegionBuilder& region_builder,
                              const TargetExtractor& target, const GpcConfig& cfg,
                              const RandomStream& stream) {
  if (cfg.B < 1 || cfg.max_iter < 1) throw std::invalid_argument("bad GPC config");
  const FitResult fit = model.mle(data);
  const Eigen::VectorXd anchor = target ? target(fit.theta) : fit.theta;

  // With-replacement resample pool: drawn once up front, or redrawn each
  // iteration when fresh_pool is set.
  RandomStream pool_stream = stream.child(0);
  const Eigen::Index n = data.n();
  std::vector<Dataset> pool;
  pool.reserve(static_cast<std::size_t>(cfg.B));
  const auto draw_pool = [&](RandomStream& src) {
    pool.clear();
    for (int b = 0; b < cfg.B; ++b) {
      std::vector<std::int64_t> idx(static_cast<std::size_t>(n));
      for (auto& v : idx)
        v = static_cast<std::int64_t>(src.uniform_int(static_cast<std::uint64_t>(n)));
      pool.push_back(data.select(idx));
    }
  };
  if (!cfg.fresh_pool) draw_pool(pool_stream);

  const RandomStream fit_stream = stream.child(1);
  const double level = 1.0 - cfg.alpha;
  LearningRateResult out;
  out.method = "gpc";
  double eta = std::clamp(cfg.eta0, cfg.eta_min, cfg.eta_max);
  out.trace.push_back(eta);
  int small_steps = 0, clipped = 0, degenerate_total = 0;
  int t = 0;
  for (; t < cfg.max_iter; ++t) {
    const RandomStream iter_stream = fit_stream.child(static_cast<std::uint64_t>(t));
    if (cfg.fresh_pool) {
      RandomStream src = pool_stream.child(static_cast<std::uint64_t>(t));
      draw_pool(src);
    }
    int covered = 0, usable = 0;
    for (int b = 0; b < cfg.B; ++b) {
      const PosteriorHandle handle = model.posterior(
          pool[static_cast<std::size_t>(b)], eta,
          iter_stream.child(static_cast<std::uint64_t>(b)));
      if (handle.degenerate) {
        ++degenerate_total;
        continue;
      }
      ++usable;
      if (contains(region_builder(handle, level), anchor)) ++covered;
    }
    if (usable == 0)
      throw std::runtime_error("every bootstrap refit was degenerate");
    const double c_hat = static_cast<double>(covered) / usable;
    const double k_t = cfg.k0 * std::pow(1.0 + t, -cfg.step_exponent);
    double next = eta + k_t * (c_hat - level);
    const double clamped = std::clamp(next, cfg.eta_min, cfg.eta_max);
    if (clamped != next) ++clipped;
    next = clamped;
    small_steps = std::abs(next - eta) < cfg.stop_tol ? small_steps + 1 : 0;
    eta = next;
    out.trace.push_back(eta);
    if (small_steps >= 3) {
      ++t;
      break;
    }
  }

  const std::size_t tail = std::min<std::size_t>(5, out.trace.size());
  double sum = 0.0;
  for (std::size_t k = out.trace.size() - tail; k < out.trace.size(); ++k)
    sum += out.trace[k];
  out.eta_hat = sum / static_cast<double>(tail);
  out.diagnostics["iterations"] = static_cast<double>(t);
  out.diagnostics["clipped_fraction"] = static_cast<double>(clipped) / t;
  out.diagnostics["bound_warning"] = clipped > t / 2 ? 1.0 : 0.0;
  out.diagnostics["degenerate_fits"] = static_cast<double>(degenerate_total);
  return out;
}

}  // namespace gbcal
