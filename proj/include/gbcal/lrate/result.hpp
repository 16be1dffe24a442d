#pragma once

#include <Eigen/Dense>
#include <map>
#include <string>
#include <vector>

namespace gbcal {

struct LearningRateResult {
  double eta_hat = 1.0;
  std::string method;
  // Method-specific path: stochastic-approximation iterates for the
  // calibration rule, per-grid-point objective values for the sequential
  // log-loss rule.
  std::vector<double> trace;
  std::map<std::string, double> diagnostics;
};

// Plug-in curvature and score-variance estimates at theta_hat:
//   V_hat      = (1/n) sum_i Hessian of log p_theta(y_i|x_i)
//   Lambda_hat = (1/n) sum_i score_i score_i'
struct SandwichEstimates {
  Eigen::MatrixXd V_hat;
  Eigen::MatrixXd Lambda_hat;
  Eigen::VectorXd theta_hat;
};

struct GpcConfig {
  double alpha = 0.05;       // nominal miscoverage
  int B = 100;               // bootstrap pool size
  double eta0 = 1.0;
  double k0 = 1.0;           // step size k_t = k0 (1+t)^{-step_exponent}
  double step_exponent = 0.51;
  int max_iter = 40;
  double eta_min = 0.01;
  double eta_max = 5.0;
  double stop_tol = 0.005;   // stop after 3 consecutive updates below this
  // Redraw the B resamples every iteration instead of reusing one pool.
  // The default keeps the coverage estimate a deterministic, monotone
  // function of eta within a run, which stabilizes the recursion.
  bool fresh_pool = false;
};

}  // namespace gbcal
