#include "gbcal/models/gaussian_location.hpp"

#include <cmath>
#include <numbers>

namespace gbcal {

namespace {
constexpr double kLog2Pi = 1.8378770664093454836;
}

GaussianLocationModel::GaussianLocationModel(double sigma, double prior_mean,
                                             double prior_var)
    : sigma_(sigma), prior_mean_(prior_mean), prior_var_(prior_var) {
  if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
  if (!(prior_var > 0.0)) throw std::invalid_argument("prior_var must be positive");
}

double GaussianLocationModel::loglik(const ParamVector& theta,
                                     const Dataset& data) const {
  const double s2 = sigma_ * sigma_;
  const double n = static_cast<double>(data.n());
  const double ss = (data.y.array() - theta[0]).square().sum();
  return -0.5 * n * (kLog2Pi + std::log(s2)) - ss / (2.0 * s2);
}

FitResult GaussianLocationModel::mle(const Dataset& data) const {
  FitResult fit;
  fit.theta.resize(1);
  fit.theta[0] = data.y.mean();
  return fit;
}

bool GaussianLocationModel::prefix_posterior(const Dataset& data, double eta,
                                             Eigen::Index m, double* mean,
                                             double* var) const {
  const double s2 = sigma_ * sigma_;
  const double prior_prec = std::isfinite(prior_var_) ? 1.0 / prior_var_ : 0.0;
  const double prec = prior_prec + eta * static_cast<double>(m) / s2;
  if (!(prec > 0.0)) return false;
  const double sum_y = data.y.head(m).sum();
  *mean = (prior_prec * prior_mean_ + eta * sum_y / s2) / prec;
  *var = 1.0 / prec;
  return true;
}

PosteriorHandle GaussianLocationModel::posterior(const Dataset& data, double eta,
                                                 const RandomStream& stream) const {
  if (!(eta > 0.0)) throw std::invalid_argument("eta must be positive");
  GaussianPayload g;
  if (!prefix_posterior(data, eta, data.n(), &g.mean, &g.var))
    throw std::runtime_error("posterior is improper (flat prior, no data)");
  PosteriorHandle h;
  h.eta = eta;
  h.kind = PosteriorKind::ClosedFormGaussian;
  h.payload = g;
  h.stream = stream;
  return h;
}

double GaussianLocationModel::sequential_predictive_negloglik(
    const Dataset& data, double eta, int i, const RandomStream&) const {
  if (i < 1 || i > data.n())
    throw std::invalid_argument("observation index out of range");
  double m, v;
  if (!prefix_posterior(data, eta, i - 1, &m, &v))
    return std::numeric_limits<double>::quiet_NaN();
  const double s2 = sigma_ * sigma_;
  const double r = data.y[i - 1] - m;
  return 0.5 * (kLog2Pi + std::log(s2)) + (r * r + v) / (2.0 * s2);
}

double GaussianLocationModel::cumulative_predictive_negloglik(
    const Dataset& data, double eta, const RandomStream&) const {
  const double s2 = sigma_ * sigma_;
  const double prior_prec = std::isfinite(prior_var_) ? 1.0 / prior_var_ : 0.0;
  double prec = prior_prec;
  double weighted = prior_prec * prior_mean_;  // prec * posterior mean
  double total = 0.0;
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    if (prec > 0.0) {
      const double m = weighted / prec;
      const double r = data.y[i] - m;
      total += 0.5 * (kLog2Pi + std::log(s2)) + (r * r + 1.0 / prec) / (2.0 * s2);
    }
    prec += eta / s2;
    weighted += eta * data.y[i] / s2;
  }
  return total;
}

Eigen::VectorXd GaussianLocationModel::obs_score(const ParamVector& theta,
                                                 const Dataset& data,
                                                 Eigen::Index i) const {
  Eigen::VectorXd s(1);
  s[0] = (data.y[i] - theta[0]) / (sigma_ * sigma_);
  return s;
}

Eigen::MatrixXd GaussianLocationModel::obs_hessian(const ParamVector&, const Dataset&,
                                                   Eigen::Index) const {
  Eigen::MatrixXd h(1, 1);
  h(0, 0) = -1.0 / (sigma_ * sigma_);
  return h;
}

double GaussianLocationModel::expected_sq_score_norm(
    const ParamVector& theta_eval, const Dataset&, Eigen::Index,
    const ParamVector& theta_gen) const {
  const double s2 = sigma_ * sigma_;
  const double delta = theta_gen[0] - theta_eval[0];
  return (s2 + delta * delta) / (s2 * s2);
}

bool GaussianLocationModel::proper_prior() const { return std::isfinite(prior_var_); }

ParamVector GaussianLocationModel::sample_prior(RandomStream& stream) const {
  if (!proper_prior()) return Model::sample_prior(stream);
  ParamVector theta(1);
  theta[0] = prior_mean_ + std::sqrt(prior_var_) * stream.normal();
  return theta;
}

double GaussianLocationModel::prior_sq_score_norm(const Dataset& data,
                                                  Eigen::Index i) const {
  if (!proper_prior()) return Model::prior_sq_score_norm(data, i);
  const double s2 = sigma_ * sigma_;
  const double d = data.y[i] - prior_mean_;
  return (d * d + prior_var_) / (s2 * s2);
}

double GaussianLocationModel::prior_expected_sq_score_norm(
    const Dataset& data, Eigen::Index i, const ParamVector& theta_gen) const {
  if (!proper_prior()) return Model::prior_expected_sq_score_norm(data, i, theta_gen);
  const double s2 = sigma_ * sigma_;
  const double d = theta_gen[0] - prior_mean_;
  return (d * d + s2 + prior_var_) / (s2 * s2);
}

}  // namespace gbcal
