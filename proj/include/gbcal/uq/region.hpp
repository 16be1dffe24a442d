#pragma once

#include <functional>

#include "gbcal/posterior.hpp"

namespace gbcal {

enum class RegionKind { Ellipsoid, Interval };

// Highest-posterior-density credible set.  Ellipsoid: { v : (v - center)'
// shape (v - center) <= radius_sq }.  Boundaries count as inside.
struct CredibleRegion {
  RegionKind kind = RegionKind::Interval;
  double level = 0.95;
  Eigen::VectorXd center;
  Eigen::MatrixXd shape;
  double radius_sq = 0.0;
  double lo = 0.0;
  double hi = 0.0;
};

bool contains(const CredibleRegion& region, const Eigen::VectorXd& point);
bool contains(const CredibleRegion& region, double point);

// Maps a parameter draw to the scalar reported by an interval target; the
// default reads a one-dimensional parameter directly.
using ScalarTarget = std::function<double(const Eigen::VectorXd&)>;

// Ellipsoidal HPD region from M posterior draws: center and shape come from
// the posterior mean and inverse covariance, the radius is the empirical
// level-quantile of the draws' Mahalanobis distances, so the region contains
// exactly ceil(level * M) of its defining draws.  NIG handles report the
// beta block; draw-based handles report every column.
CredibleRegion hpd_ellipsoid(const PosteriorHandle& handle, double level,
                             int M = 2000);

// Shortest interval holding posterior mass >= level.  Exact for the
// closed-form Gaussian (mean +/- z sd) and the piecewise-constant density
// (knot scan on the analytic cdf); for draw matrices it is the shortest
// window containing ceil(level * M) of the sorted transformed draws.
CredibleRegion hpd_interval(const PosteriorHandle& handle, double level,
                            const ScalarTarget& target = {});

}  // namespace gbcal
