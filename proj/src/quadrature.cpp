#include "gbcal/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace gbcal {

GaussHermite::GaussHermite(int k) {
  if (k < 1) throw std::invalid_argument("quadrature order must be positive");
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(k, k);
  for (int i = 1; i < k; ++i) {
    const double b = std::sqrt(static_cast<double>(i));
    jacobi(i, i - 1) = b;
    jacobi(i - 1, i) = b;
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jacobi);
  nodes.resize(static_cast<std::size_t>(k));
  weights.resize(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    nodes[static_cast<std::size_t>(i)] = es.eigenvalues()[i];
    const double v = es.eigenvectors()(0, i);
    weights[static_cast<std::size_t>(i)] = v * v;
  }
}

}  // namespace gbcal
