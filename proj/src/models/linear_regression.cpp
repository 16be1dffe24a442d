#include "gbcal/models/linear_regression.hpp"

#include <boost/math/special_functions/digamma.hpp>
#include <cmath>

namespace gbcal {

namespace {
constexpr double kLog2Pi = 1.8378770664093454836;
}

LinearRegressionModel::LinearRegressionModel(int p, Eigen::VectorXd prior_mean_beta,
                                             double g, double a0, double b0)
    : p_(p), m0_(std::move(prior_mean_beta)), g_(g), a0_(a0), b0_(b0) {
  if (p <= 0) throw std::invalid_argument("p must be positive");
  if (m0_.size() == 0) m0_ = Eigen::VectorXd::Zero(p);
  if (m0_.size() != p) throw std::invalid_argument("prior_mean_beta has wrong length");
  if (!(g > 0.0) || !(a0 > 0.0) || !(b0 > 0.0))
    throw std::invalid_argument("g, a0, b0 must be positive");
}

double LinearRegressionModel::loglik(const ParamVector& theta,
                                     const Dataset& data) const {
  const double s2 = theta[p_];
  if (!(s2 > 0.0)) throw std::invalid_argument("sigma^2 must be positive");
  const Eigen::VectorXd r = data.y - data.x * theta.head(p_);
  const double n = static_cast<double>(data.n());
  return -0.5 * n * (kLog2Pi + std::log(s2)) - r.squaredNorm() / (2.0 * s2);
}

FitResult LinearRegressionModel::mle(const Dataset& data) const {
  FitResult fit;
  fit.theta.resize(p_ + 1);
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(data.x);
  if (qr.rank() < p_) {
    fit.theta.setZero();
    fit.converged = false;
    fit.degenerate = true;
    return fit;
  }
  const Eigen::VectorXd beta = qr.solve(data.y);
  const double s2 = (data.y - data.x * beta).squaredNorm() / static_cast<double>(data.n());
  fit.theta.head(p_) = beta;
  fit.theta[p_] = s2;
  if (!(s2 > 0.0)) fit.degenerate = true;
  return fit;
}

NigPayload LinearRegressionModel::posterior_params(const Eigen::MatrixXd& xtx,
                                                   const Eigen::VectorXd& xty,
                                                   double yty, double n,
                                                   double eta) const {
  NigPayload q;
  Eigen::MatrixXd prec = eta * xtx;
  prec.diagonal().array() += 1.0 / g_;
  const Eigen::LDLT<Eigen::MatrixXd> ldlt(prec);
  const Eigen::VectorXd rhs = m0_ / g_ + eta * xty;
  q.m = ldlt.solve(rhs);
  q.V = ldlt.solve(Eigen::MatrixXd::Identity(p_, p_));
  q.a = a0_ + 0.5 * eta * n;
  q.b = b0_ + 0.5 * (eta * yty + m0_.squaredNorm() / g_ - q.m.dot(rhs));
  if (!(q.b > 0.0)) throw std::runtime_error("posterior scale b is not positive");
  return q;
}

PosteriorHandle LinearRegressionModel::posterior(const Dataset& data, double eta,
                                                 const RandomStream& stream) const {
  if (!(eta > 0.0)) throw std::invalid_argument("eta must be positive");
  const Eigen::MatrixXd xtx = data.x.transpose() * data.x;
  const Eigen::VectorXd xty = data.x.transpose() * data.y;
  PosteriorHandle h;
  h.eta = eta;
  h.kind = PosteriorKind::ClosedFormNIG;
  h.payload = posterior_params(xtx, xty, data.y.squaredNorm(),
                               static_cast<double>(data.n()), eta);
  h.stream = stream;
  return h;
}

double LinearRegressionModel::sequential_predictive_negloglik(
    const Dataset& data, double eta, int i, const RandomStream&) const {
  if (i < 1 || i > data.n())
    throw std::invalid_argument("observation index out of range");
  const Eigen::Index m = i - 1;
  const Eigen::MatrixXd xm = data.x.topRows(m);
  const NigPayload q =
      posterior_params(xm.transpose() * xm, xm.transpose() * data.y.head(m),
                       data.y.head(m).squaredNorm(), static_cast<double>(m), eta);
  const Eigen::VectorXd xi = data.x.row(i - 1).transpose();
  const double r = data.y[i - 1] - xi.dot(q.m);
  return 0.5 * kLog2Pi + 0.5 * (std::log(q.b) - boost::math::digamma(q.a)) +
         0.5 * (r * r * q.a / q.b + xi.dot(q.V * xi));
}

double LinearRegressionModel::cumulative_predictive_negloglik(
    const Dataset& data, double eta, const RandomStream&) const {
  Eigen::MatrixXd xtx = Eigen::MatrixXd::Zero(p_, p_);
  Eigen::VectorXd xty = Eigen::VectorXd::Zero(p_);
  double yty = 0.0;
  double total = 0.0;
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    const NigPayload q = posterior_params(xtx, xty, yty, static_cast<double>(i), eta);
    const Eigen::VectorXd xi = data.x.row(i).transpose();
    const double r = data.y[i] - xi.dot(q.m);
    total += 0.5 * kLog2Pi + 0.5 * (std::log(q.b) - boost::math::digamma(q.a)) +
             0.5 * (r * r * q.a / q.b + xi.dot(q.V * xi));
    xtx.noalias() += xi * xi.transpose();
    xty.noalias() += xi * data.y[i];
    yty += data.y[i] * data.y[i];
  }
  return total;
}

Eigen::VectorXd LinearRegressionModel::obs_score(const ParamVector& theta,
                                                 const Dataset& data,
                                                 Eigen::Index i) const {
  const double s2 = theta[p_];
  const Eigen::VectorXd xi = data.x.row(i).transpose();
  const double r = data.y[i] - xi.dot(theta.head(p_));
  Eigen::VectorXd s(p_ + 1);
  s.head(p_) = r * xi / s2;
  s[p_] = -0.5 / s2 + r * r / (2.0 * s2 * s2);
  return s;
}

Eigen::MatrixXd LinearRegressionModel::obs_hessian(const ParamVector& theta,
                                                   const Dataset& data,
                                                   Eigen::Index i) const {
  const double s2 = theta[p_];
  const Eigen::VectorXd xi = data.x.row(i).transpose();
  const double r = data.y[i] - xi.dot(theta.head(p_));
  Eigen::MatrixXd h(p_ + 1, p_ + 1);
  h.topLeftCorner(p_, p_) = -xi * xi.transpose() / s2;
  h.block(0, p_, p_, 1) = -r * xi / (s2 * s2);
  h.block(p_, 0, 1, p_) = h.block(0, p_, p_, 1).transpose();
  h(p_, p_) = 0.5 / (s2 * s2) - r * r / (s2 * s2 * s2);
  return h;
}

double LinearRegressionModel::expected_sq_score_norm(
    const ParamVector& theta_eval, const Dataset& data, Eigen::Index i,
    const ParamVector& theta_gen) const {
  const Eigen::VectorXd xi = data.x.row(i).transpose();
  const double se2 = theta_eval[p_];
  const double sg2 = theta_gen[p_];
  const double delta = xi.dot(theta_gen.head(p_) - theta_eval.head(p_));
  const double er2 = delta * delta + sg2;
  const double er4 = std::pow(delta, 4) + 6.0 * delta * delta * sg2 + 3.0 * sg2 * sg2;
  const double beta_part = xi.squaredNorm() * er2 / (se2 * se2);
  const double sig_part = 0.25 * er4 / std::pow(se2, 4) -
                          0.5 * er2 / std::pow(se2, 3) + 0.25 / (se2 * se2);
  return beta_part + sig_part;
}

ParamVector LinearRegressionModel::sample_prior(RandomStream& stream) const {
  ParamVector theta(p_ + 1);
  const double sigma2 = b0_ / stream.gamma(a0_);
  for (int j = 0; j < p_; ++j)
    theta[j] = m0_[j] + std::sqrt(g_ * sigma2) * stream.normal();
  theta[p_] = sigma2;
  return theta;
}

double LinearRegressionModel::inv_sigma_moment(int k) const {
  double out = 1.0;
  for (int j = 0; j < k; ++j) out *= (a0_ + j) / b0_;
  return out;
}

double LinearRegressionModel::prior_sq_score_norm(const Dataset& data,
                                                  Eigen::Index i) const {
  const Eigen::VectorXd xi = data.x.row(i).transpose();
  const double s = xi.squaredNorm();
  const double mu = data.y[i] - xi.dot(m0_);
  const double e1 = inv_sigma_moment(1), e2 = inv_sigma_moment(2),
               e3 = inv_sigma_moment(3), e4 = inv_sigma_moment(4);
  const double mu2 = mu * mu, mu4 = mu2 * mu2;
  const double beta_part = s * (mu2 * e2 + g_ * s * e1);
  const double sig_part = 0.25 * (mu4 * e4 + 6.0 * mu2 * g_ * s * e3 +
                                  3.0 * g_ * g_ * s * s * e2) -
                          0.5 * (mu2 * e3 + g_ * s * e2) + 0.25 * e2;
  return beta_part + sig_part;
}

double LinearRegressionModel::prior_expected_sq_score_norm(
    const Dataset& data, Eigen::Index i, const ParamVector& theta_gen) const {
  const Eigen::VectorXd xi = data.x.row(i).transpose();
  const double s = xi.squaredNorm();
  const double sg2 = theta_gen[p_];
  const double delta = xi.dot(theta_gen.head(p_) - m0_);
  // Moments of mu = y - x'm0 with y ~ N(x'beta_gen, sg2).
  const double mu2 = delta * delta + sg2;
  const double mu4 = std::pow(delta, 4) + 6.0 * delta * delta * sg2 + 3.0 * sg2 * sg2;
  const double e1 = inv_sigma_moment(1), e2 = inv_sigma_moment(2),
               e3 = inv_sigma_moment(3), e4 = inv_sigma_moment(4);
  const double beta_part = s * (mu2 * e2 + g_ * s * e1);
  const double sig_part = 0.25 * (mu4 * e4 + 6.0 * mu2 * g_ * s * e3 +
                                  3.0 * g_ * g_ * s * s * e2) -
                          0.5 * (mu2 * e3 + g_ * s * e2) + 0.25 * e2;
  return beta_part + sig_part;
}

}  // namespace gbcal
