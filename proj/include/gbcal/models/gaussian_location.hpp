#pragma once

#include <limits>

#include "gbcal/model.hpp"

namespace gbcal {

// y_i ~ N(theta, sigma^2) with sigma known and a N(prior_mean, prior_var)
// prior on theta.  prior_var = +inf selects the flat improper prior, under
// which the eta-posterior is N(ybar, sigma^2 / (n eta)).
class GaussianLocationModel : public Model {
 public:
  explicit GaussianLocationModel(
      double sigma, double prior_mean = 0.0,
      double prior_var = std::numeric_limits<double>::infinity());

  int dim() const override { return 1; }
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

  bool proper_prior() const override;
  ParamVector sample_prior(RandomStream& stream) const override;
  double prior_sq_score_norm(const Dataset& data, Eigen::Index i) const override;
  double prior_expected_sq_score_norm(const Dataset& data, Eigen::Index i,
                                      const ParamVector& theta_gen) const override;

  double sigma() const { return sigma_; }

 private:
  // Posterior mean and variance given the first m observations (m may be 0);
  // returns false when that posterior is improper.
  bool prefix_posterior(const Dataset& data, double eta, Eigen::Index m,
                        double* mean, double* var) const;

  double sigma_;
  double prior_mean_;
  double prior_var_;
};

}  // namespace gbcal
