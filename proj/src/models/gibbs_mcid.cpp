#include "gbcal/models/gibbs_mcid.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace gbcal {

namespace {

// Unique ascending x values and, per value, the summed responses of the
// tied rows.  count(theta) = #neg + sum_{k: x_k <= e_j} y_k on the segment
// (e_j, e_{j+1}].
struct Profile {
  std::vector<double> edges;
  std::vector<double> tie_sum;   // per edge
  double n_neg = 0.0;
};

Profile build_profile(const Dataset& data) {
  std::map<double, double> acc;
  Profile pr;
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    acc[data.x(i, 0)] += data.y[i];
    if (data.y[i] < 0) pr.n_neg += 1.0;
  }
  pr.edges.reserve(acc.size());
  pr.tie_sum.reserve(acc.size());
  for (const auto& [x, s] : acc) {
    pr.edges.push_back(x);
    pr.tie_sum.push_back(s);
  }
  return pr;
}

}  // namespace

double GibbsMcidModel::loglik(const ParamVector& theta, const Dataset& data) const {
  double count = 0.0;
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    const bool geq = data.x(i, 0) >= theta[0];  // sign(x - theta) = +1
    if (data.y[i] > 0) count += geq ? 0.0 : 1.0;
    else count += geq ? 1.0 : 0.0;
  }
  return -count;
}

std::vector<double> GibbsMcidModel::risk_profile(const Dataset& data) {
  const Profile pr = build_profile(data);
  std::vector<double> out;
  out.reserve(pr.edges.size() + 1);
  double c = pr.n_neg;
  out.push_back(c);  // theta <= min x
  for (double s : pr.tie_sum) {
    c += s;
    out.push_back(c);
  }
  return out;
}

FitResult GibbsMcidModel::mle(const Dataset& data) const {
  const Profile pr = build_profile(data);
  const std::size_t K = pr.edges.size() - 1;  // segment count
  double best = pr.n_neg;
  double best_mid = pr.edges.front();
  double c = pr.n_neg;
  for (std::size_t j = 0; j < K; ++j) {
    c += pr.tie_sum[j];
    if (c < best) {
      best = c;
      best_mid = 0.5 * (pr.edges[j] + pr.edges[j + 1]);
    }
  }
  FitResult fit;
  fit.theta.resize(1);
  fit.theta[0] = best_mid;
  return fit;
}

PosteriorHandle GibbsMcidModel::posterior(const Dataset& data, double eta,
                                          const RandomStream& stream) const {
  if (!(eta >= 0.0)) throw std::invalid_argument("eta must be non-negative");
  const Profile pr = build_profile(data);
  if (pr.edges.size() < 2)
    throw std::runtime_error("sample range is a single point");
  const std::size_t K = pr.edges.size() - 1;

  std::vector<double> count(K);
  double c = pr.n_neg;
  double cmin = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < K; ++j) {
    c += pr.tie_sum[j];
    count[j] = c;
    cmin = std::min(cmin, c);
  }
  PiecewisePayload pw;
  pw.edges = Eigen::Map<const Eigen::VectorXd>(pr.edges.data(),
                                               static_cast<Eigen::Index>(pr.edges.size()));
  pw.mass.resize(static_cast<Eigen::Index>(K));
  double z = 0.0;
  for (std::size_t j = 0; j < K; ++j) {
    const double len = pr.edges[j + 1] - pr.edges[j];
    pw.mass[static_cast<Eigen::Index>(j)] = std::exp(-eta * (count[j] - cmin)) * len;
    z += pw.mass[static_cast<Eigen::Index>(j)];
  }
  pw.mass /= z;

  PosteriorHandle h;
  h.eta = eta;
  h.kind = PosteriorKind::PiecewiseConstant1D;
  h.payload = std::move(pw);
  h.stream = stream;
  return h;
}

double GibbsMcidModel::sequential_predictive_negloglik(const Dataset& data,
                                                       double eta, int i,
                                                       const RandomStream&) const {
  if (i < 1 || i > data.n())
    throw std::invalid_argument("observation index out of range");
  // Delegate to the sequential pass; cost is acceptable for single terms.
  const Profile pr = build_profile(data);
  if (pr.edges.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  const std::size_t K = pr.edges.size() - 1;
  std::vector<double> count(K, 0.0);
  auto edge_index = [&](double x) {
    return static_cast<std::size_t>(
        std::lower_bound(pr.edges.begin(), pr.edges.end(), x) - pr.edges.begin());
  };
  for (Eigen::Index k = 0; k + 1 < i; ++k) {
    const std::size_t m = edge_index(data.x(k, 0));
    for (std::size_t j = m; j < K; ++j) count[j] += data.y[k];
  }
  const double cmin = *std::min_element(count.begin(), count.end());
  double z = 0.0, gt = 0.0;
  const std::size_t m = edge_index(data.x(i - 1, 0));
  for (std::size_t j = 0; j < K; ++j) {
    const double w = std::exp(-eta * (count[j] - cmin)) * (pr.edges[j + 1] - pr.edges[j]);
    z += w;
    if (j >= m) gt += w;
  }
  const double p_gt = gt / z;
  return data.y[i - 1] > 0 ? p_gt : 1.0 - p_gt;
}

double GibbsMcidModel::cumulative_predictive_negloglik(const Dataset& data,
                                                       double eta,
                                                       const RandomStream&) const {
  const Profile pr = build_profile(data);
  if (pr.edges.size() < 2) return 0.0;
  const std::size_t K = pr.edges.size() - 1;
  std::vector<double> len(K), count(K, 0.0);
  for (std::size_t j = 0; j < K; ++j) len[j] = pr.edges[j + 1] - pr.edges[j];
  auto edge_index = [&](double x) {
    return static_cast<std::size_t>(
        std::lower_bound(pr.edges.begin(), pr.edges.end(), x) - pr.edges.begin());
  };
  double total = 0.0;
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    const std::size_t m = edge_index(data.x(i, 0));
    const double cmin = *std::min_element(count.begin(), count.end());
    double z = 0.0, gt = 0.0;
    for (std::size_t j = 0; j < K; ++j) {
      const double w = std::exp(-eta * (count[j] - cmin)) * len[j];
      z += w;
      if (j >= m) gt += w;
    }
    const double p_gt = gt / z;
    total += data.y[i] > 0 ? p_gt : 1.0 - p_gt;
    for (std::size_t j = m; j < K; ++j) count[j] += data.y[i];
  }
  return total;
}

}  // namespace gbcal
