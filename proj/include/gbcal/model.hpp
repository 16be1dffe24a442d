#pragma once

#include <Eigen/Dense>

#include "gbcal/dataset.hpp"
#include "gbcal/errors.hpp"
#include "gbcal/posterior.hpp"
#include "gbcal/random.hpp"

namespace gbcal {

struct FitResult {
  ParamVector theta;
  bool converged = true;
  // Set when the fit is unusable (perfect separation, singular design, ...);
  // callers mark the replication accordingly.
  bool degenerate = false;
};

struct ScoreHessian {
  Eigen::VectorXd score;    // sum over observations of per-row gradients
  Eigen::MatrixXd hessian;  // sum over observations of per-row Hessians
};

// A conditional model p_theta(y | x) together with its prior, fit machinery,
// and generalized posterior at learning rate eta.  For the Gibbs variant the
// "log likelihood" slot returns the negated empirical risk -n R_n(theta) and
// the derivative-based operations are unsupported.
class Model {
 public:
  virtual ~Model() = default;

  virtual int dim() const = 0;
  virtual bool differentiable() const = 0;

  virtual double loglik(const ParamVector& theta, const Dataset& data) const = 0;
  virtual FitResult mle(const Dataset& data) const = 0;
  virtual PosteriorHandle posterior(const Dataset& data, double eta,
                                    const RandomStream& stream) const = 0;

  // Term i (1-based) of the sequential predictive log-loss sum: the expected
  // negative log score of observation i under the eta-posterior built from
  // observations 1..i-1.  Returns NaN when that prefix posterior is improper
  // (such terms are identical for every eta and drop out of comparisons).
  virtual double sequential_predictive_negloglik(const Dataset& data, double eta,
                                                 int i,
                                                 const RandomStream& stream) const = 0;
  // Sum of the defined terms above; overridden where a single sequential
  // pass is much cheaper than n independent prefix fits.
  virtual double cumulative_predictive_negloglik(const Dataset& data, double eta,
                                                 const RandomStream& stream) const;

  // Per-observation derivatives of log p_theta(y_i | x_i).
  virtual Eigen::VectorXd obs_score(const ParamVector& theta, const Dataset& data,
                                    Eigen::Index i) const;
  virtual Eigen::MatrixXd obs_hessian(const ParamVector& theta, const Dataset& data,
                                      Eigen::Index i) const;
  ScoreHessian score_hessian(const ParamVector& theta, const Dataset& data) const;

  // E_{y ~ p(.|x_i, theta_gen)} || d/dtheta log p_theta(y|x_i) |_{theta_eval} ||^2,
  // in closed form (the response is Gaussian or binary in every model here).
  virtual double expected_sq_score_norm(const ParamVector& theta_eval,
                                        const Dataset& data, Eigen::Index i,
                                        const ParamVector& theta_gen) const;

  // Prior-related hooks for the Fisher-divergence learning-rate rule.  When
  // the prior is proper in every coordinate the reference distribution rho
  // is the prior itself and the two *_prior_* functions integrate the
  // squared score norm against it in closed form; otherwise rho degenerates
  // to a point mass at theta_hat and the selectors fall back to obs_score /
  // expected_sq_score_norm at theta_hat.
  virtual bool proper_prior() const = 0;
  virtual ParamVector sample_prior(RandomStream& stream) const;
  virtual double prior_sq_score_norm(const Dataset& data, Eigen::Index i) const;
  virtual double prior_expected_sq_score_norm(const Dataset& data, Eigen::Index i,
                                              const ParamVector& theta_gen) const;
};

}  // namespace gbcal
