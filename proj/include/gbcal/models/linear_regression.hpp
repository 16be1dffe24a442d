#pragma once

#include "gbcal/model.hpp"

namespace gbcal {

// Gaussian linear regression y = x'beta + eps, eps ~ N(0, sigma^2), with the
// conjugate normal-inverse-gamma prior
//   beta | sigma^2 ~ N(m0, g sigma^2 I),   sigma^2 ~ InvGamma(a0, b0),
// so the eta-tempered posterior stays NIG in closed form.  theta packs
// (beta, sigma^2); dim() == p + 1.
class LinearRegressionModel : public Model {
 public:
  explicit LinearRegressionModel(int p, Eigen::VectorXd prior_mean_beta = {},
                                 double g = 100.0, double a0 = 1.0, double b0 = 1.0);

  int dim() const override { return p_ + 1; }
  bool differentiable() const override { return true; }

  double loglik(const ParamVector& theta, const Dataset& data) const override;
  FitResult mle(const Dataset& data) const override;
  PosteriorHandle posterior(const Dataset& data, double eta,
                            const RandomStream& stream) const override;
  double sequential_predictive_negloglik(const Dataset& data, double eta, int i,
                                         const RandomStream& stream) const override;
  double cumulative_predictive_negloglik(const Dataset& data, double eta,
                                         const RandomStream& stream) const override;

  Eigen::VectorXd obs_score(const ParamVector& theta, const Dataset& data,
                            Eigen::Index i) const override;
  Eigen::MatrixXd obs_hessian(const ParamVector& theta, const Dataset& data,
                              Eigen::Index i) const override;
  double expected_sq_score_norm(const ParamVector& theta_eval, const Dataset& data,
                                Eigen::Index i,
                                const ParamVector& theta_gen) const override;

  bool proper_prior() const override { return true; }
  ParamVector sample_prior(RandomStream& stream) const override;
  double prior_sq_score_norm(const Dataset& data, Eigen::Index i) const override;
  double prior_expected_sq_score_norm(const Dataset& data, Eigen::Index i,
                                      const ParamVector& theta_gen) const override;

  int p() const { return p_; }

 private:
  NigPayload posterior_params(const Eigen::MatrixXd& xtx, const Eigen::VectorXd& xty,
                              double yty, double n, double eta) const;
  // Moments E[sigma^{-2k}] under the prior, k = 1..4.
  double inv_sigma_moment(int k) const;

  int p_;
  Eigen::VectorXd m0_;
  double g_, a0_, b0_;
};

}  // namespace gbcal
