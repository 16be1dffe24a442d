#pragma once

#include <functional>
#include <optional>

#include "gbcal/lrate/result.hpp"
#include "gbcal/model.hpp"
#include "gbcal/uq/region.hpp"

namespace gbcal {

SandwichEstimates estimate_sandwich(const Model& model, const Dataset& data);

struct LyddonOptions {
  // Drop the trailing coordinate (the scale parameter in the regression
  // model) from both traces.  The benchmark runs the regression experiments
  // this way; see README.
  bool beta_only = false;
};

// eta_hat = tr(J Lambda^{-1} J) / tr(J) with J = -V_hat, the learning rate
// matching the information in the generalized posterior to the sandwich
// variance of theta_hat.
LearningRateResult lyddon_select(const Model& model, const Dataset& data,
                                 const LyddonOptions& options = {});

// Grid minimizer of the cumulative expected predictive log-loss
//   sum_i E_{theta ~ Pi_{i-1}^{(eta)}} [ -log p_theta(Y_i | X_i) ]
// over the given grid, observations taken in dataset order.
LearningRateResult safebayes_select(const Model& model, const Dataset& data,
                                    const std::vector<double>& grid,
                                    const RandomStream& stream);

std::vector<double> default_safebayes_grid();

// Fisher-divergence matching rule: eta_hat solves
//   eta^2 * E_{P_n} I_1 = E_{P_theta_hat} I_1,
// I_1(x,y) the squared score norm integrated over a reference distribution
// rho (the prior when proper in every coordinate, else a point mass at
// theta_hat).  The numerator integrates y against the fitted model in
// closed form over the observed covariate rows.  prior_draws is the Monte
// Carlo size used when a model supplies no closed-form prior integral.
LearningRateResult holmes_walker_select(const Model& model, const Dataset& data,
                                        int prior_draws, const RandomStream& stream);

using RegionBuilder =
    std::function<CredibleRegion(const PosteriorHandle&, double level)>;
using TargetExtractor = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

// Bootstrap calibration by stochastic approximation: drive the fraction of
// resample posteriors whose (1-alpha) region captures theta_hat_n toward
// 1 - alpha.  The B resamples are drawn once and reused every iteration
// (redrawn per iteration when cfg.fresh_pool is set); the returned eta_hat
// averages the last five iterates.
LearningRateResult gpc_select(const Model& model, const Dataset& data,
                              const RegionBuilder& region_builder,
                              const TargetExtractor& target, const GpcConfig& cfg,
                              const RandomStream& stream);

}  // namespace gbcal
