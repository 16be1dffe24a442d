#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <variant>

#include "gbcal/random.hpp"

namespace gbcal {

enum class PosteriorKind {
  ClosedFormGaussian,   // scalar N(mean, var)
  ClosedFormNIG,        // normal-inverse-gamma over (beta, sigma^2)
  SampleMatrix,         // MCMC draws, one parameter vector per row
  PiecewiseConstant1D,  // exact density, constant between knots
};

struct GaussianPayload {
  double mean = 0.0;
  double var = 0.0;
};

// beta | sigma^2 ~ N(m, sigma^2 V), sigma^2 ~ InvGamma(a, b).
struct NigPayload {
  Eigen::VectorXd m;
  Eigen::MatrixXd V;
  double a = 0.0;
  double b = 0.0;
};

struct SamplePayload {
  Eigen::MatrixXd draws;  // M x dim
  double acceptance_rate = 0.0;
  bool mixing_warning = false;
};

// Density proportional to exp(logw[k]) on (edges[k], edges[k+1]]; mass[k]
// is the normalized segment probability.
struct PiecewisePayload {
  Eigen::VectorXd edges;  // K+1 ascending knots
  Eigen::VectorXd mass;   // K, sums to 1
};

struct PosteriorHandle {
  double eta = 1.0;
  PosteriorKind kind = PosteriorKind::ClosedFormGaussian;
  std::variant<GaussianPayload, NigPayload, SamplePayload, PiecewisePayload> payload;
  // Source for any internal draws needed downstream (e.g. region radii), so
  // that region construction is reproducible from the handle alone.
  RandomStream stream{0};
  bool degenerate = false;

  const GaussianPayload& gaussian() const { return std::get<GaussianPayload>(payload); }
  const NigPayload& nig() const { return std::get<NigPayload>(payload); }
  const SamplePayload& samples() const { return std::get<SamplePayload>(payload); }
  const PiecewisePayload& piecewise() const { return std::get<PiecewisePayload>(payload); }
};

// Exact first and second moments for the closed-form kinds (the NIG moments
// are those of the beta marginal, a multivariate t), sample moments for
// SampleMatrix, interval-measure arithmetic for PiecewiseConstant1D.
void posterior_mean_cov(const PosteriorHandle& handle, Eigen::VectorXd* mean,
                        Eigen::MatrixXd* cov);

// M parameter draws, one per row.  SampleMatrix handles return their stored
// draws (M is ignored); closed-form kinds sample through the handle stream.
Eigen::MatrixXd posterior_draws(const PosteriorHandle& handle, int M);

}  // namespace gbcal
