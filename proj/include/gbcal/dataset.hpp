#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace gbcal {

using ParamVector = Eigen::VectorXd;

// Observations (x_i, y_i), i = 0..n-1.  The covariate block may have zero
// columns (location-only and MCID-threshold models read just y, or just x
// and a sign response).
struct Dataset {
  Eigen::MatrixXd x;  // n rows, p >= 0 columns
  Eigen::VectorXd y;  // n rows

  Dataset() = default;
  Dataset(Eigen::MatrixXd x_in, Eigen::VectorXd y_in)
      : x(std::move(x_in)), y(std::move(y_in)) {
    if (x.size() > 0 && x.rows() != y.size())
      throw std::invalid_argument("Dataset: x rows and y length disagree");
  }
  static Dataset from_y(Eigen::VectorXd y_in) {
    Dataset d;
    d.x.resize(y_in.size(), 0);
    d.y = std::move(y_in);
    return d;
  }

  Eigen::Index n() const { return y.size(); }
  Eigen::Index p() const { return x.cols(); }

  // First m observations, in order.
  Dataset prefix(Eigen::Index m) const {
    Dataset d;
    d.x = x.topRows(m);
    d.y = y.head(m);
    return d;
  }

  // Rows at the given indices (with repetition allowed), e.g. a bootstrap
  // resample.
  Dataset select(const std::vector<std::int64_t>& idx) const {
    Dataset d;
    d.x.resize(static_cast<Eigen::Index>(idx.size()), x.cols());
    d.y.resize(static_cast<Eigen::Index>(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k) {
      d.x.row(static_cast<Eigen::Index>(k)) = x.row(idx[k]);
      d.y[static_cast<Eigen::Index>(k)] = y[idx[k]];
    }
    return d;
  }
};

}  // namespace gbcal
