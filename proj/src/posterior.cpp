#include "gbcal/posterior.hpp"

#include <cmath>

namespace gbcal {

namespace {
constexpr std::uint64_t kDrawLabel = 0xD7;
}

void posterior_mean_cov(const PosteriorHandle& handle, Eigen::VectorXd* mean,
                        Eigen::MatrixXd* cov) {
  switch (handle.kind) {
    case PosteriorKind::ClosedFormGaussian: {
      const auto& g = handle.gaussian();
      mean->resize(1);
      (*mean)[0] = g.mean;
      cov->resize(1, 1);
      (*cov)(0, 0) = g.var;
      return;
    }
    case PosteriorKind::ClosedFormNIG: {
      const auto& q = handle.nig();
      if (q.a <= 1.0)
        throw std::runtime_error("posterior_mean_cov: NIG covariance needs a > 1");
      *mean = q.m;
      *cov = (q.b / (q.a - 1.0)) * q.V;
      return;
    }
    case PosteriorKind::SampleMatrix: {
      const Eigen::MatrixXd& d = handle.samples().draws;
      const double M = static_cast<double>(d.rows());
      *mean = d.colwise().mean();
      const Eigen::MatrixXd centered = d.rowwise() - mean->transpose();
      *cov = centered.transpose() * centered / (M - 1.0);
      return;
    }
    case PosteriorKind::PiecewiseConstant1D: {
      const auto& pw = handle.piecewise();
      double m1 = 0.0, m2 = 0.0;
      for (Eigen::Index k = 0; k < pw.mass.size(); ++k) {
        const double l = pw.edges[k], u = pw.edges[k + 1];
        m1 += pw.mass[k] * 0.5 * (l + u);
        m2 += pw.mass[k] * (l * l + l * u + u * u) / 3.0;
      }
      mean->resize(1);
      (*mean)[0] = m1;
      cov->resize(1, 1);
      (*cov)(0, 0) = m2 - m1 * m1;
      return;
    }
  }
  throw std::logic_error("posterior_mean_cov: unknown kind");
}

Eigen::MatrixXd posterior_draws(const PosteriorHandle& handle, int M) {
  RandomStream stream = handle.stream.child(kDrawLabel);
  switch (handle.kind) {
    case PosteriorKind::ClosedFormGaussian: {
      const auto& g = handle.gaussian();
      const double sd = std::sqrt(g.var);
      Eigen::MatrixXd out(M, 1);
      for (int i = 0; i < M; ++i) out(i, 0) = g.mean + sd * stream.normal();
      return out;
    }
    case PosteriorKind::ClosedFormNIG: {
      const auto& q = handle.nig();
      const Eigen::Index p = q.m.size();
      const Eigen::MatrixXd L = Eigen::LLT<Eigen::MatrixXd>(q.V).matrixL();
      Eigen::MatrixXd out(M, p + 1);
      Eigen::VectorXd z(p);
      for (int i = 0; i < M; ++i) {
        const double sigma2 = q.b / stream.gamma(q.a);
        for (Eigen::Index j = 0; j < p; ++j) z[j] = stream.normal();
        out.row(i).head(p) = (q.m + std::sqrt(sigma2) * (L * z)).transpose();
        out(i, p) = sigma2;
      }
      return out;
    }
    case PosteriorKind::SampleMatrix:
      return handle.samples().draws;
    case PosteriorKind::PiecewiseConstant1D: {
      const auto& pw = handle.piecewise();
      Eigen::MatrixXd out(M, 1);
      for (int i = 0; i < M; ++i) {
        double u = stream.uniform();
        double acc = 0.0;
        Eigen::Index k = 0;
        for (; k < pw.mass.size() - 1; ++k) {
          if (u <= acc + pw.mass[k]) break;
          acc += pw.mass[k];
        }
        const double frac = pw.mass[k] > 0.0 ? (u - acc) / pw.mass[k] : 0.5;
        out(i, 0) = pw.edges[k] + frac * (pw.edges[k + 1] - pw.edges[k]);
      }
      return out;
    }
  }
  throw std::logic_error("posterior_draws: unknown kind");
}

}  // namespace gbcal
