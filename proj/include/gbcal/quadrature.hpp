#pragma once

#include <Eigen/Dense>
#include <vector>

namespace gbcal {

// Gauss-Hermite rule for integrals against the standard normal density:
// E[g(Z)] ~= sum_i w_i g(node_i), computed by Golub-Welsch on the Jacobi
// matrix of the (probabilists') Hermite recurrence.  Weights sum to one.
struct GaussHermite {
  explicit GaussHermite(int k);
  std::vector<double> nodes;
  std::vector<double> weights;

  template <typename F>
  double integrate(F&& g, double mean = 0.0, double sd = 1.0) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i)
      acc += weights[i] * g(mean + sd * nodes[i]);
    return acc;
  }
};

}  // namespace gbcal
