#pragma once

#include <Eigen/Dense>
#include <random>

#include "gbcal/model.hpp"

namespace testutil {

// Central finite differences of the summed log-likelihood; step and
// tolerance per the derivative contract (step 1e-5, rel. tol. 1e-4).
inline Eigen::VectorXd fd_gradient(const gbcal::Model& model,
                                   const gbcal::ParamVector& theta,
                                   const gbcal::Dataset& data,
                                   double step = 1e-5) {
  Eigen::VectorXd g(theta.size());
  for (Eigen::Index j = 0; j < theta.size(); ++j) {
    gbcal::ParamVector up = theta, dn = theta;
    up[j] += step;
    dn[j] -= step;
    g[j] = (model.loglik(up, data) - model.loglik(dn, data)) / (2.0 * step);
  }
  return g;
}

// Central finite differences of the analytic score, column by column.
inline Eigen::MatrixXd fd_hessian(const gbcal::Model& model,
                                  const gbcal::ParamVector& theta,
                                  const gbcal::Dataset& data,
                                  double step = 1e-5) {
  const Eigen::Index d = theta.size();
  Eigen::MatrixXd h(d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    gbcal::ParamVector up = theta, dn = theta;
    up[j] += step;
    dn[j] -= step;
    h.col(j) = (model.score_hessian(up, data).score -
                model.score_hessian(dn, data).score) /
               (2.0 * step);
  }
  return h;
}

inline bool close_rel(double a, double b, double rel, double abs_floor = 1e-7) {
  const double scale = std::max({std::abs(a), std::abs(b), abs_floor / rel});
  return std::abs(a - b) <= rel * scale;
}

inline bool matrices_close_rel(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                               double rel, double abs_floor = 1e-7) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      if (!close_rel(a(i, j), b(i, j), rel, abs_floor)) return false;
  return true;
}

// Independent random source for Monte Carlo oracles, deliberately not the
// library generator.
class OracleRng {
 public:
  explicit OracleRng(std::uint64_t seed) : eng_(seed) {}
  double normal() { return normal_(eng_); }
  double uniform() { return uniform_(eng_); }
  double gamma(double shape) {
    std::gamma_distribution<double> d(shape, 1.0);
    return d(eng_);
  }

 private:
  std::mt19937_64 eng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

// Mean and standard error of a sample.
struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

inline MeanSe mean_se(const std::vector<double>& v) {
  MeanSe out;
  const double n = static_cast<double>(v.size());
  for (double x : v) out.mean += x;
  out.mean /= n;
  double ss = 0.0;
  for (double x : v) ss += (x - out.mean) * (x - out.mean);
  out.se = std::sqrt(ss / (n - 1.0) / n);
  return out;
}

}  // namespace testutil
