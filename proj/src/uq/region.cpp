#include "gbcal/uq/region.hpp"

#include <algorithm>
#include <boost/math/distributions/normal.hpp>
#include <cmath>

#include "gbcal/errors.hpp"

namespace gbcal {

bool contains(const CredibleRegion& region, const Eigen::VectorXd& point) {
  if (region.kind == RegionKind::Interval) {
    if (point.size() != 1) throw std::invalid_argument("interval expects a scalar");
    return contains(region, point[0]);
  }
  const Eigen::VectorXd d = point - region.center;
  return d.dot(region.shape * d) <= region.radius_sq;
}

bool contains(const CredibleRegion& region, double point) {
  if (region.kind != RegionKind::Interval)
    throw std::invalid_argument("scalar containment needs an interval region");
  return point >= region.lo && point <= region.hi;
}

CredibleRegion hpd_ellipsoid(const PosteriorHandle& handle, double level, int M) {
  if (!(level > 0.0 && level < 1.0)) throw std::invalid_argument("level in (0,1)");
  Eigen::MatrixXd draws = posterior_draws(handle, M);
  if (handle.kind == PosteriorKind::ClosedFormNIG)
    draws = draws.leftCols(draws.cols() - 1).eval();  // beta block only
  const Eigen::Index m = draws.rows();
  if (m < 100) throw std::runtime_error("too few draws for a stable region");

  CredibleRegion region;
  region.kind = RegionKind::Ellipsoid;
  region.level = level;

  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
  posterior_mean_cov(handle, &mean, &cov);
  if (handle.kind == PosteriorKind::SampleMatrix &&
      mean.size() != draws.cols()) {
    throw std::logic_error("draw/moment dimension mismatch");
  }
  region.center = mean;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(cov);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) {
    Eigen::MatrixXd ridged = cov;
    ridged.diagonal().array() += 1e-10 * cov.trace() / static_cast<double>(cov.rows());
    ldlt.compute(ridged);
  }
  region.shape = ldlt.solve(Eigen::MatrixXd::Identity(cov.rows(), cov.cols()));

  std::vector<double> dist(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) {
    const Eigen::VectorXd d = draws.row(i).transpose() - region.center;
    dist[static_cast<std::size_t>(i)] = d.dot(region.shape * d);
  }
  const std::size_t k = static_cast<std::size_t>(
      std::ceil(level * static_cast<double>(m)));
  std::nth_element(dist.begin(), dist.begin() + (k - 1), dist.end());
  region.radius_sq = dist[k - 1];
  return region;
}

namespace {

CredibleRegion shortest_window(std::vector<double> v, double level) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size();
  const std::size_t w = static_cast<std::size_t>(
      std::ceil(level * static_cast<double>(m)));
  std::size_t best = 0;
  double best_len = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j + w <= m; ++j) {
    const double len = v[j + w - 1] - v[j];
    if (len < best_len) {
      best_len = len;
      best = j;
    }
  }
  CredibleRegion region;
  region.kind = RegionKind::Interval;
  region.level = level;
  region.lo = v[best];
  region.hi = v[best + w - 1];
  return region;
}

// Shortest [a,b] with F(b) - F(a) >= level for a piecewise-constant density.
// The optimal interval can be taken with one endpoint on a knot: the length
// of the level-set window is piecewise linear in its start point, so a
// minimum occurs where either endpoint crosses a knot.
CredibleRegion piecewise_shortest(const PiecewisePayload& pw, double level) {
  const Eigen::Index K = pw.mass.size();
  std::vector<double> cdf(static_cast<std::size_t>(K) + 1, 0.0);
  for (Eigen::Index j = 0; j < K; ++j)
    cdf[static_cast<std::size_t>(j) + 1] = cdf[static_cast<std::size_t>(j)] + pw.mass[j];
  cdf.back() = 1.0;

  auto quantile = [&](double q) {
    const auto it = std::lower_bound(cdf.begin(), cdf.end(), q);
    std::size_t j = static_cast<std::size_t>(it - cdf.begin());
    if (j == 0) return pw.edges[0];
    --j;  // q in (cdf[j], cdf[j+1]]
    const double seg_mass = cdf[j + 1] - cdf[j];
    const double frac = seg_mass > 0.0 ? (q - cdf[j]) / seg_mass : 1.0;
    return pw.edges[static_cast<Eigen::Index>(j)] +
           frac * (pw.edges[static_cast<Eigen::Index>(j) + 1] -
                   pw.edges[static_cast<Eigen::Index>(j)]);
  };
  auto cdf_at = [&](double x) {
    if (x <= pw.edges[0]) return 0.0;
    if (x >= pw.edges[K]) return 1.0;
    const auto it = std::upper_bound(pw.edges.data(), pw.edges.data() + K + 1, x);
    const std::size_t j = static_cast<std::size_t>(it - pw.edges.data()) - 1;
    const double lo = pw.edges[static_cast<Eigen::Index>(j)];
    const double hi = pw.edges[static_cast<Eigen::Index>(j) + 1];
    return cdf[j] + (x - lo) / (hi - lo) * (cdf[j + 1] - cdf[j]);
  };

  double best_lo = pw.edges[0], best_hi = pw.edges[K];
  double best_len = best_hi - best_lo;
  auto consider = [&](double a, double b) {
    if (b - a < best_len) {
      best_len = b - a;
      best_lo = a;
      best_hi = b;
    }
  };
  for (Eigen::Index j = 0; j <= K; ++j) {
    const double e = pw.edges[j];
    const double fa = cdf_at(e);
    if (fa + level <= 1.0 + 1e-12) consider(e, quantile(std::min(fa + level, 1.0)));
    if (fa - level >= -1e-12) consider(quantile(std::max(fa - level, 0.0)), e);
  }
  CredibleRegion region;
  region.kind = RegionKind::Interval;
  region.level = level;
  region.lo = best_lo;
  region.hi = best_hi;
  return region;
}

}  // namespace

CredibleRegion hpd_interval(const PosteriorHandle& handle, double level,
                            const ScalarTarget& target) {
  if (!(level > 0.0 && level < 1.0)) throw std::invalid_argument("level in (0,1)");
  switch (handle.kind) {
    case PosteriorKind::ClosedFormGaussian: {
      const auto& g = handle.gaussian();
      const double z = boost::math::quantile(boost::math::normal(), 0.5 * (1.0 + level));
      CredibleRegion region;
      region.kind = RegionKind::Interval;
      region.level = level;
      region.lo = g.mean - z * std::sqrt(g.var);
      region.hi = g.mean + z * std::sqrt(g.var);
      return region;
    }
    case PosteriorKind::PiecewiseConstant1D:
      return piecewise_shortest(handle.piecewise(), level);
    case PosteriorKind::SampleMatrix: {
      const Eigen::MatrixXd& draws = handle.samples().draws;
      if (draws.rows() < 100) throw std::runtime_error("too few draws for a stable region");
      if (!target && draws.cols() != 1)
        throw std::invalid_argument("multivariate draws need a scalar target");
      std::vector<double> v(static_cast<std::size_t>(draws.rows()));
      for (Eigen::Index i = 0; i < draws.rows(); ++i)
        v[static_cast<std::size_t>(i)] =
            target ? target(draws.row(i).transpose()) : draws(i, 0);
      return shortest_window(std::move(v), level);
    }
    case PosteriorKind::ClosedFormNIG:
      throw UnsupportedOperation("interval targets are scalar; use hpd_ellipsoid");
  }
  throw std::logic_error("hpd_interval: unknown kind");
}

}  // namespace gbcal
