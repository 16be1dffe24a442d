#include "gbcal/uq/metrics.hpp"

#include <cmath>

namespace gbcal {

void replication_metrics(const PosteriorHandle& handle, const CredibleRegion& region,
                         const Eigen::VectorXd& truth, ReplicationRecord* record,
                         const ScalarTarget& target) {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
  if (handle.kind == PosteriorKind::SampleMatrix && target) {
    const Eigen::MatrixXd& draws = handle.samples().draws;
    Eigen::VectorXd t(draws.rows());
    for (Eigen::Index i = 0; i < draws.rows(); ++i)
      t[i] = target(draws.row(i).transpose());
    mean.resize(1);
    mean[0] = t.mean();
    cov.resize(1, 1);
    cov(0, 0) = (t.array() - mean[0]).square().sum() /
                static_cast<double>(t.size() - 1);
  } else {
    posterior_mean_cov(handle, &mean, &cov);
  }
  if (mean.size() != truth.size())
    throw std::invalid_argument("truth dimension does not match the target");

  record->covered = contains(region, truth) ? 1 : 0;
  record->mse = (mean - truth).squaredNorm();
  record->avg_marginal_var = cov.diagonal().mean();
  record->interval_length = region.kind == RegionKind::Interval
                                ? region.hi - region.lo
                                : std::numeric_limits<double>::quiet_NaN();
}

}  // namespace gbcal
