#include "gbcal/model.hpp"

#include <cmath>

namespace gbcal {

double Model::cumulative_predictive_negloglik(const Dataset& data, double eta,
                                              const RandomStream& stream) const {
  double total = 0.0;
  for (int i = 1; i <= data.n(); ++i) {
    const double term = sequential_predictive_negloglik(data, eta, i, stream);
    if (std::isfinite(term)) total += term;
  }
  return total;
}

Eigen::VectorXd Model::obs_score(const ParamVector&, const Dataset&, Eigen::Index) const {
  throw UnsupportedOperation("model has no score function");
}

Eigen::MatrixXd Model::obs_hessian(const ParamVector&, const Dataset&, Eigen::Index) const {
  throw UnsupportedOperation("model has no Hessian");
}

ScoreHessian Model::score_hessian(const ParamVector& theta, const Dataset& data) const {
  ScoreHessian out;
  out.score = Eigen::VectorXd::Zero(dim());
  out.hessian = Eigen::MatrixXd::Zero(dim(), dim());
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    out.score += obs_score(theta, data, i);
    out.hessian += obs_hessian(theta, data, i);
  }
  return out;
}

double Model::expected_sq_score_norm(const ParamVector&, const Dataset&, Eigen::Index,
                                     const ParamVector&) const {
  throw UnsupportedOperation("model has no closed-form expected score norm");
}

ParamVector Model::sample_prior(RandomStream&) const {
  throw UnsupportedOperation("prior is improper; cannot sample it");
}

double Model::prior_sq_score_norm(const Dataset&, Eigen::Index) const {
  throw UnsupportedOperation("no closed-form prior score integral");
}

double Model::prior_expected_sq_score_norm(const Dataset&, Eigen::Index,
                                           const ParamVector&) const {
  throw UnsupportedOperation("no closed-form prior score integral");
}

}  // namespace gbcal
