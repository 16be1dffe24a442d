#include "gbcal/dgp/dgp.hpp"

#include <algorithm>
#include <boost/math/distributions/normal.hpp>
#include <cmath>

#include "gbcal/quadrature.hpp"

namespace gbcal {

Dataset ToyDgp::generate(int n, RandomStream& stream) const {
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) y[i] = theta_star_ + sigma_star_ * stream.normal();
  return Dataset::from_y(std::move(y));
}

Eigen::VectorXd ToyDgp::true_target() const {
  Eigen::VectorXd t(1);
  t[0] = theta_star_;
  return t;
}

Eigen::Matrix4d regression_design_cholesky() {
  Eigen::Matrix4d sigma;
  for (int j = 0; j < 4; ++j)
    for (int k = 0; k < 4; ++k) sigma(j, k) = std::pow(0.2, std::abs(j - k));
  return Eigen::LLT<Eigen::Matrix4d>(sigma).matrixL();
}

Eigen::Vector4d regression_coefficients() { return {1.0, 1.0, 2.0, -1.0}; }

namespace {

Eigen::MatrixXd draw_design(int n, RandomStream& stream) {
  static const Eigen::Matrix4d L = regression_design_cholesky();
  Eigen::MatrixXd x(n, 4);
  Eigen::Vector4d z;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < 4; ++j) z[j] = stream.normal();
    x.row(i) = (L * z).transpose();
  }
  return x;
}

}  // namespace

DependentErrorsDgp::DependentErrorsDgp(double s_small, double s_mod)
    : s_small_(s_small), s_mod_(s_mod) {
  if (!(s_small > 0.0) || !(s_mod > 0.0))
    throw std::invalid_argument("band scales must be positive");
}

DependentErrorsDgp::DependentErrorsDgp(int degree) {
  switch (degree) {
    case 1: s_small_ = 0.25; s_mod_ = 0.50; break;
    case 2: s_small_ = 0.05; s_mod_ = 0.25; break;
    case 3: s_small_ = 0.01; s_mod_ = 0.10; break;
    default: throw std::invalid_argument("degree must be 1, 2 or 3");
  }
}

Dataset DependentErrorsDgp::generate(int n, RandomStream& stream) const {
  Eigen::MatrixXd x = draw_design(n, stream);

  // Empirical 5% / 95% cut points of the first covariate, placed so that
  // exactly floor(0.05 n) observations fall strictly below / above.
  std::vector<double> x1(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) x1[static_cast<std::size_t>(i)] = x(i, 0);
  std::sort(x1.begin(), x1.end());
  const int k = static_cast<int>(std::floor(0.05 * n));
  const double lo = x1[static_cast<std::size_t>(k)];
  const double hi = x1[static_cast<std::size_t>(n - 1 - k)];

  const Eigen::Vector4d beta = regression_coefficients();
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) {
    double s = s_mod_;
    if (x(i, 0) < lo) s = s_small_;
    else if (x(i, 0) > hi) s = 1.0;
    y[i] = x.row(i).dot(beta) + s * stream.normal();
  }
  return Dataset(std::move(x), std::move(y));
}

Eigen::VectorXd DependentErrorsDgp::true_target() const {
  return regression_coefficients();
}

TErrorsDgp::TErrorsDgp(int degree) {
  switch (degree) {
    case 1: dof_ = 5.0; break;
    case 2: dof_ = 4.0; break;
    case 3: dof_ = 3.0; break;
    default: throw std::invalid_argument("degree must be 1, 2 or 3");
  }
}

Dataset TErrorsDgp::generate(int n, RandomStream& stream) const {
  Eigen::MatrixXd x = draw_design(n, stream);
  const Eigen::Vector4d beta = regression_coefficients();
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) y[i] = x.row(i).dot(beta) + stream.student_t(dof_);
  return Dataset(std::move(x), std::move(y));
}

Eigen::VectorXd TErrorsDgp::true_target() const { return regression_coefficients(); }

MixtureLogisticDgp::MixtureLogisticDgp(double mu, Target target)
    : mu_(mu), target_(target) {}

MixtureLogisticDgp::MixtureLogisticDgp(int degree, Target target) : target_(target) {
  switch (degree) {
    case 1: mu_ = 7.0; break;
    case 2: mu_ = 8.0; break;
    case 3: mu_ = 9.0; break;
    default: throw std::invalid_argument("degree must be 1, 2 or 3");
  }
}

double MixtureLogisticDgp::mixture_cdf(double x) const {
  static const boost::math::normal std_normal;
  return 0.7 * boost::math::cdf(std_normal, x - 5.0) +
         0.3 * boost::math::cdf(std_normal, x - mu_);
}

Dataset MixtureLogisticDgp::generate(int n, RandomStream& stream) const {
  Eigen::MatrixXd x(n, 1);
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) {
    const double center = stream.uniform() < 0.7 ? 5.0 : mu_;
    x(i, 0) = center + stream.normal();
    y[i] = stream.uniform() < mixture_cdf(x(i, 0)) ? 1.0 : -1.0;
  }
  return Dataset(std::move(x), std::move(y));
}

double MixtureLogisticDgp::mcid_root() const {
  double lo = 0.0, hi = 20.0;
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    (mixture_cdf(mid) < 0.5 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

Eigen::Vector2d MixtureLogisticDgp::logistic_projection() const {
  const GaussHermite gh(80);
  const auto sigmoid = [](double t) {
    return t >= 0.0 ? 1.0 / (1.0 + std::exp(-t)) : std::exp(t) / (1.0 + std::exp(t));
  };
  Eigen::Vector2d beta = Eigen::Vector2d::Zero();
  for (int it = 0; it < 200; ++it) {
    Eigen::Vector2d grad = Eigen::Vector2d::Zero();
    Eigen::Matrix2d hess = Eigen::Matrix2d::Zero();
    // E over the x-mixture of (F(b0 + b1 x) - Fstar(x)) (1, x) and its
    // derivative; two Gauss-Hermite sweeps, one per component.
    for (double center : {5.0, mu_}) {
      const double wc = center == 5.0 ? 0.7 : 0.3;
      for (std::size_t q = 0; q < gh.nodes.size(); ++q) {
        const double x = center + gh.nodes[q];
        const double w = wc * gh.weights[q];
        const double f = sigmoid(beta[0] + beta[1] * x);
        const double resid = f - mixture_cdf(x);
        const Eigen::Vector2d zx(1.0, x);
        grad += w * resid * zx;
        hess += w * f * (1.0 - f) * zx * zx.transpose();
      }
    }
    const Eigen::Vector2d step = hess.ldlt().solve(grad);
    beta -= step;
    if (step.lpNorm<Eigen::Infinity>() < 1e-12) break;
  }
  return beta;
}

Eigen::VectorXd MixtureLogisticDgp::true_target() const {
  Eigen::VectorXd t(1);
  if (target_ == Target::McidRoot) {
    t[0] = mcid_root();
  } else {
    const Eigen::Vector2d b = logistic_projection();
    t[0] = -b[0] / b[1];
  }
  return t;
}

}  // namespace gbcal
