#pragma once

#include "gbcal/model.hpp"

namespace gbcal {

// Logistic working model for the minimum clinically important difference:
//   P(Y = +1 | X = x) = F(beta0 + beta1 x),  F the logistic cdf,
// with the threshold of interest theta = -beta0 / beta1.  The prior is flat
// in beta1 and puts
//   pi(beta0) = bhat^{-1} exp{ beta0 - bhat^{-1} e^{beta0} },
// an extreme-value form centered empirically via bhat = exp(beta0_mle +
// gamma_Euler).  Posteriors are sampled with an adaptive random-walk
// Metropolis chain initialized at the MLE; the step scale is tuned toward
// 0.3 acceptance during burn-in (factor 1.1 every 50 steps) and frozen
// afterwards.
class LogisticMcidModel : public Model {
 public:
  explicit LogisticMcidModel(double proposal_scale = 1.7, int burn_in = 1000,
                             int chain_length = 2000);

  int dim() const override { return 2; }
  bool differentiable() const override { return true; }

  double loglik(const ParamVector& theta, const Dataset& data) const override;
  FitResult mle(const Dataset& data) const override;
  PosteriorHandle posterior(const Dataset& data, double eta,
                            const RandomStream& stream) const override;
  double sequential_predictive_negloglik(const Dataset& data, double eta, int i,
                                         const RandomStream& stream) const override;

  Eigen::VectorXd obs_score(const ParamVector& theta, const Dataset& data,
                            Eigen::Index i) const override;
  Eigen::MatrixXd obs_hessian(const ParamVector& theta, const Dataset& data,
                              Eigen::Index i) const override;
  double expected_sq_score_norm(const ParamVector& theta_eval, const Dataset& data,
                                Eigen::Index i,
                                const ParamVector& theta_gen) const override;

  bool proper_prior() const override { return false; }

  // Number of posterior draws used per term of the sequential predictive
  // log-loss sum.
  int predictive_draws() const { return predictive_draws_; }
  void set_predictive_draws(int s) { predictive_draws_ = s; }

 private:
  struct Chain {
    Eigen::MatrixXd draws;
    double acceptance_rate;
  };
  // RWM over (beta0, beta1) targeting eta * loglik + logprior, proposal
  // covariance scale^2 * base_cov.
  Chain run_chain(const Dataset& data, double eta, const ParamVector& init,
                  const Eigen::MatrixXd& base_cov, double bhat, int burn_in,
                  int keep, RandomStream& stream) const;

  double proposal_scale_;
  int burn_in_;
  int chain_length_;
  int predictive_draws_ = 500;
};

// True iff a threshold classifier separates the classes perfectly (the
// logistic MLE then diverges and the flat-in-beta1 posterior is improper).
bool threshold_separable(const Dataset& data);

}  // namespace gbcal
