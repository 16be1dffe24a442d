#pragma once

#include "gbcal/dataset.hpp"
#include "gbcal/random.hpp"

namespace gbcal {

// Sampling distribution used by the benchmark, together with the exact (or
// high-precision numeric) target the posteriors are judged against.
class Dgp {
 public:
  virtual ~Dgp() = default;
  virtual Dataset generate(int n, RandomStream& stream) const = 0;
  virtual Eigen::VectorXd true_target() const = 0;
};

// y_i ~ N(theta_star, sigma_star^2), analyzed with a known-sigma location
// model; sigma_star controls the variance mismatch (sigma/sigma_star)^2.
class ToyDgp : public Dgp {
 public:
  ToyDgp(double theta_star, double sigma_star)
      : theta_star_(theta_star), sigma_star_(sigma_star) {}
  Dataset generate(int n, RandomStream& stream) const override;
  Eigen::VectorXd true_target() const override;

 private:
  double theta_star_;
  double sigma_star_;
};

// Four correlated Gaussian covariates (Sigma_jk = 0.2^|j-k|), true
// coefficients (1, 1, 2, -1), and residual scale chosen by the empirical
// position of x_1: the lowest 5% band gets s_small, the top 5% band gets 1,
// the middle gets s_mod.  Degrees 1..3 sharpen the heteroscedasticity:
// (0.25, 0.50), (0.05, 0.25), (0.01, 0.10).
class DependentErrorsDgp : public Dgp {
 public:
  explicit DependentErrorsDgp(int degree);
  // Arbitrary band scales (the top band always has scale 1).
  DependentErrorsDgp(double s_small, double s_mod);
  Dataset generate(int n, RandomStream& stream) const override;
  Eigen::VectorXd true_target() const override;

 private:
  double s_small_, s_mod_;
};

// Same design and coefficients, i.i.d. Student-t errors with dof 5/4/3 for
// degrees 1/2/3 (unscaled).
class TErrorsDgp : public Dgp {
 public:
  explicit TErrorsDgp(int degree);
  Dataset generate(int n, RandomStream& stream) const override;
  Eigen::VectorXd true_target() const override;

 private:
  double dof_;
};

// X from the 0.7 N(5,1) + 0.3 N(mu,1) mixture, Y = +1 with probability
// Fstar(X) where Fstar is that same mixture's cdf; mu in {7, 8, 9} for
// degrees 1..3.  Two targets are in play: the exact root of
// Fstar(theta) = 1/2, and the threshold -b0/b1 of the KL projection of the
// truth onto the logistic model.
class MixtureLogisticDgp : public Dgp {
 public:
  enum class Target { McidRoot, LogisticProjection };
  MixtureLogisticDgp(int degree, Target target);
  // Arbitrary second-component location.
  MixtureLogisticDgp(double mu, Target target);
  Dataset generate(int n, RandomStream& stream) const override;
  Eigen::VectorXd true_target() const override;

  double mixture_cdf(double x) const;            // also the success probability
  double mcid_root() const;                      // bisection to 1e-10
  Eigen::Vector2d logistic_projection() const;   // quadrature + Newton

 private:
  double mu_;
  Target target_;
};

// Shared design pieces for the regression DGPs.
Eigen::Matrix4d regression_design_cholesky();
Eigen::Vector4d regression_coefficients();

}  // namespace gbcal
