#include "gbcal/models/logistic_mcid.hpp"

#include <cmath>
#include <limits>

namespace gbcal {

namespace {

constexpr double kEulerGamma = 0.57721566490153286;
constexpr double kSeparationBound = 30.0;

inline double sigmoid(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

// log F(v) summed over v = y .* (b0 + b1 x), branch-free for SIMD.
inline double log_sigmoid_sum(const Eigen::ArrayXd& yx_v) {
  return (yx_v.min(0.0) - (-yx_v.abs()).exp().log1p()).sum();
}

struct ChainData {
  Eigen::ArrayXd x;
  Eigen::ArrayXd y;
};

inline double target_logdens(const ChainData& d, double eta, double b0, double b1,
                             double bhat) {
  const double ll = log_sigmoid_sum(d.y * (b0 + b1 * d.x));
  const double lp = b0 - std::exp(b0) / bhat;  // - log(bhat) constant dropped
  return eta * ll + lp;
}

}  // namespace

LogisticMcidModel::LogisticMcidModel(double proposal_scale, int burn_in,
                                     int chain_length)
    : proposal_scale_(proposal_scale), burn_in_(burn_in), chain_length_(chain_length) {
  if (!(proposal_scale > 0.0)) throw std::invalid_argument("proposal_scale > 0 required");
  if (burn_in < 0 || chain_length < 1)
    throw std::invalid_argument("bad chain configuration");
}

double LogisticMcidModel::loglik(const ParamVector& theta, const Dataset& data) const {
  return log_sigmoid_sum(data.y.array() *
                         (theta[0] + theta[1] * data.x.col(0).array()));
}

bool threshold_separable(const Dataset& data) {
  double min_pos = std::numeric_limits<double>::infinity();
  double max_pos = -std::numeric_limits<double>::infinity();
  double min_neg = std::numeric_limits<double>::infinity();
  double max_neg = -std::numeric_limits<double>::infinity();
  bool has_pos = false, has_neg = false;
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    const double xi = data.x(i, 0);
    if (data.y[i] > 0) {
      has_pos = true;
      min_pos = std::min(min_pos, xi);
      max_pos = std::max(max_pos, xi);
    } else {
      has_neg = true;
      min_neg = std::min(min_neg, xi);
      max_neg = std::max(max_neg, xi);
    }
  }
  if (!has_pos || !has_neg) return true;
  return max_neg < min_pos || max_pos < min_neg;
}

FitResult LogisticMcidModel::mle(const Dataset& data) const {
  FitResult fit;
  fit.theta = Eigen::VectorXd::Zero(2);
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(2);
  double ll = loglik(beta, data);
  bool converged = false;
  for (int it = 0; it < 100; ++it) {
    Eigen::Vector2d grad = Eigen::Vector2d::Zero();
    Eigen::Matrix2d hess = Eigen::Matrix2d::Zero();
    for (Eigen::Index i = 0; i < data.n(); ++i) {
      const double xi = data.x(i, 0);
      const double u = beta[0] + beta[1] * xi;
      const double f = sigmoid(u);
      const Eigen::Vector2d z(1.0, xi);
      grad += data.y[i] > 0 ? (1.0 - f) * z : -f * z;
      hess -= f * (1.0 - f) * z * z.transpose();
    }
    if (grad.lpNorm<Eigen::Infinity>() < 1e-8) {
      converged = true;
      break;
    }
    Eigen::Vector2d step = -hess.fullPivLu().solve(grad);
    if (!step.allFinite()) break;
    double t = 1.0;
    for (int h = 0; h < 40; ++h) {
      const Eigen::VectorXd cand = beta + t * step;
      const double cand_ll = loglik(cand, data);
      if (cand_ll > ll || h == 39) {
        beta = cand;
        ll = cand_ll;
        break;
      }
      t *= 0.5;
    }
    if (beta.lpNorm<Eigen::Infinity>() > kSeparationBound) break;
  }
  fit.theta = beta;
  fit.converged = converged;
  fit.degenerate = !converged || beta.lpNorm<Eigen::Infinity>() > kSeparationBound;
  return fit;
}

LogisticMcidModel::Chain LogisticMcidModel::run_chain(
    const Dataset& data, double eta, const ParamVector& init,
    const Eigen::MatrixXd& base_cov, double bhat, int burn_in, int keep,
    RandomStream& stream) const {
  ChainData d{data.x.col(0).array(), data.y.array()};
  Eigen::Matrix2d cov = base_cov;
  Eigen::LLT<Eigen::Matrix2d> llt(cov);
  if (llt.info() != Eigen::Success) {
    cov = Eigen::Matrix2d::Identity();
    llt.compute(cov);
  }
  const Eigen::Matrix2d L = llt.matrixL();

  double scale = proposal_scale_;
  Eigen::Vector2d cur = init;
  double cur_ld = target_logdens(d, eta, cur[0], cur[1], bhat);

  Chain out;
  out.draws.resize(keep, 2);
  int accepted_window = 0, accepted_keep = 0;
  for (int t = 0; t < burn_in + keep; ++t) {
    const Eigen::Vector2d z(stream.normal(), stream.normal());
    const Eigen::Vector2d prop = cur + scale * (L * z);
    const double prop_ld = target_logdens(d, eta, prop[0], prop[1], bhat);
    const bool accept = std::log(stream.uniform()) < prop_ld - cur_ld;
    if (accept) {
      cur = prop;
      cur_ld = prop_ld;
      if (t < burn_in) ++accepted_window;
      else ++accepted_keep;
    }
    if (t < burn_in && (t + 1) % 50 == 0) {
      scale *= (accepted_window > 15) ? 1.1 : (1.0 / 1.1);  // 0.3 * 50 = 15
      accepted_window = 0;
    }
    if (t >= burn_in) out.draws.row(t - burn_in) = cur.transpose();
  }
  out.acceptance_rate = static_cast<double>(accepted_keep) / keep;
  return out;
}

PosteriorHandle LogisticMcidModel::posterior(const Dataset& data, double eta,
                                             const RandomStream& stream) const {
  if (!(eta > 0.0)) throw std::invalid_argument("eta must be positive");
  const FitResult fit = mle(data);
  const double bhat = std::exp(fit.theta[0] + kEulerGamma);

  const ScoreHessian sh = score_hessian(fit.theta, data);
  Eigen::Matrix2d info = -sh.hessian;
  Eigen::Matrix2d base_cov;
  bool ok = info.allFinite() && info.determinant() > 1e-12;
  if (ok) base_cov = info.inverse() / eta;
  else base_cov = Eigen::Matrix2d::Identity();

  RandomStream chain_stream = stream.child(0);
  const Chain chain = run_chain(data, eta, fit.theta, base_cov, bhat, burn_in_,
                                chain_length_, chain_stream);
  SamplePayload pay;
  pay.draws = chain.draws;
  pay.acceptance_rate = chain.acceptance_rate;
  pay.mixing_warning = chain.acceptance_rate < 0.05 || chain.acceptance_rate > 0.7;

  PosteriorHandle h;
  h.eta = eta;
  h.kind = PosteriorKind::SampleMatrix;
  h.payload = std::move(pay);
  h.stream = stream;
  h.degenerate = fit.degenerate;
  return h;
}

double LogisticMcidModel::sequential_predictive_negloglik(
    const Dataset& data, double eta, int i, const RandomStream& stream) const {
  if (i < 1 || i > data.n())
    throw std::invalid_argument("observation index out of range");
  const Dataset prefix = data.prefix(i - 1);
  // Terms whose prefix posterior is improper (separable or single-class
  // prefix) are skipped; whether a prefix separates is a property of the
  // data alone, so the same terms drop for every eta.
  if (i - 1 < 2 || threshold_separable(prefix))
    return std::numeric_limits<double>::quiet_NaN();
  const FitResult prefix_fit = mle(prefix);
  if (prefix_fit.degenerate) return std::numeric_limits<double>::quiet_NaN();

  const FitResult full_fit = mle(data);
  const double bhat = std::exp(full_fit.theta[0] + kEulerGamma);

  const ScoreHessian sh = score_hessian(prefix_fit.theta, prefix);
  Eigen::Matrix2d info = -sh.hessian;
  Eigen::Matrix2d base_cov;
  if (info.allFinite() && info.determinant() > 1e-12) base_cov = info.inverse() / eta;
  else base_cov = Eigen::Matrix2d::Identity();

  RandomStream chain_stream = stream.child(static_cast<std::uint64_t>(i));
  const Chain chain = run_chain(prefix, eta, prefix_fit.theta, base_cov, bhat, 200,
                                predictive_draws_, chain_stream);

  const double xi = data.x(i - 1, 0);
  const double yi = data.y[i - 1];
  double total = 0.0;
  for (Eigen::Index s = 0; s < chain.draws.rows(); ++s) {
    const double v = yi * (chain.draws(s, 0) + chain.draws(s, 1) * xi);
    total += std::min(v, 0.0) - std::log1p(std::exp(-std::abs(v)));
  }
  return -total / static_cast<double>(chain.draws.rows());
}

Eigen::VectorXd LogisticMcidModel::obs_score(const ParamVector& theta,
                                             const Dataset& data,
                                             Eigen::Index i) const {
  const double xi = data.x(i, 0);
  const double u = theta[0] + theta[1] * xi;
  const double w = data.y[i] * sigmoid(-data.y[i] * u);
  Eigen::VectorXd s(2);
  s << w, w * xi;
  return s;
}

Eigen::MatrixXd LogisticMcidModel::obs_hessian(const ParamVector& theta,
                                               const Dataset& data,
                                               Eigen::Index i) const {
  const double xi = data.x(i, 0);
  const double u = theta[0] + theta[1] * xi;
  const double w = sigmoid(u) * sigmoid(-u);
  Eigen::MatrixXd h(2, 2);
  h << w, w * xi, w * xi, w * xi * xi;
  return -h;
}

double LogisticMcidModel::expected_sq_score_norm(const ParamVector& theta_eval,
                                                 const Dataset& data, Eigen::Index i,
                                                 const ParamVector& theta_gen) const {
  const double xi = data.x(i, 0);
  const double ue = theta_eval[0] + theta_eval[1] * xi;
  const double ug = theta_gen[0] + theta_gen[1] * xi;
  const double fe = sigmoid(ue), fg = sigmoid(ug);
  return (1.0 + xi * xi) *
         (fg * (1.0 - fe) * (1.0 - fe) + (1.0 - fg) * fe * fe);
}

}  // namespace gbcal
