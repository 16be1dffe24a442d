#pragma once

#include "gbcal/model.hpp"

namespace gbcal {

// Gibbs posterior for the MCID threshold theta under the misclassification
// loss
//   l_theta(x, y) = (1 - y * sign(x - theta)) / 2,   sign(0) = +1,
// with a uniform prior on the sample range [x_(1), x_(n)].  The density
//   pi_n(theta) ∝ exp{ -eta n R_n(theta) }
// is piecewise constant between order statistics of x, so posteriors,
// moments, credible intervals and predictive risks are all exact; no
// sampling is involved.  loglik() plays the role of the model log
// likelihood and returns -n R_n(theta).
class GibbsMcidModel : public Model {
 public:
  GibbsMcidModel() = default;

  int dim() const override { return 1; }
  bool differentiable() const override { return false; }

  double loglik(const ParamVector& theta, const Dataset& data) const override;
  // Midpoint of the leftmost interval of empirical-risk minimizers.
  FitResult mle(const Dataset& data) const override;
  PosteriorHandle posterior(const Dataset& data, double eta,
                            const RandomStream& stream) const override;
  double sequential_predictive_negloglik(const Dataset& data, double eta, int i,
                                         const RandomStream& stream) const override;
  double cumulative_predictive_negloglik(const Dataset& data, double eta,
                                         const RandomStream& stream) const override;

  bool proper_prior() const override { return true; }

  // n R_n(theta) for all n+1 constancy intervals of the real line, ordered
  // left to right: theta <= x_(1), the in-support segments, theta > x_(n).
  static std::vector<double> risk_profile(const Dataset& data);
};

}  // namespace gbcal
