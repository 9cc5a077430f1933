#include "bgwr/local_stats.hpp"

#include <cmath>
#include <numbers>

#include "bgwr/error.hpp"

namespace bgwr {

LocationStats::LocationStats(const Dataset& data, const DistanceMatrix& d)
    : groups_(group_locations(data, d)), p_(data.p()) {
  const std::size_t nl = groups_.size();
  dist_.resize(nl, nl);
  for (std::size_t k = 0; k < nl; ++k)
    for (std::size_t l = 0; l < nl; ++l) dist_(k, l) = d(groups_.label_index[k], groups_.label_index[l]);

  xtx_.assign(nl, Eigen::MatrixXd::Zero(p_, p_));
  xty_.assign(nl, Eigen::VectorXd::Zero(p_));
  yty_.assign(nl, 0.0);
  for (std::size_t k = 0; k < nl; ++k) {
    for (std::size_t i : groups_.members[k]) {
      const auto xi = data.X.row(i).transpose();
      xtx_[k].noalias() += xi * xi.transpose();
      xty_[k] += data.y(i) * xi;
      yty_[k] += data.y(i) * data.y(i);
    }
  }
}

LocationStats::Weighted LocationStats::weighted(const WeightScheme& scheme) const {
  const std::size_t nl = size();
  Weighted w;
  w.xtwx.assign(nl, Eigen::MatrixXd::Zero(p_, p_));
  w.xtwy.assign(nl, Eigen::VectorXd::Zero(p_));
  w.ytwy = Eigen::VectorXd::Zero(nl);
  w.count = Eigen::VectorXd::Zero(nl);
  w.logdet = Eigen::VectorXd::Zero(nl);
  for (std::size_t s = 0; s < nl; ++s) {
    for (std::size_t l = 0; l < nl; ++l) {
      const double lw = kernel_log_weight(scheme, dist_(s, l));
      if (!std::isfinite(lw)) continue;
      const double wt = std::exp(lw);
      const auto m = static_cast<double>(groups_.members[l].size());
      w.xtwx[s] += wt * xtx_[l];
      w.xtwy[s] += wt * xty_[l];
      w.ytwy(s) += wt * yty_[l];
      w.count(s) += m;
      w.logdet(s) += m * lw;
    }
  }
  return w;
}

LocationStats::Weighted LocationStats::flat() const {
  const std::size_t nl = size();
  Weighted w;
  w.xtwx.assign(nl, Eigen::MatrixXd::Zero(p_, p_));
  w.xtwy.assign(nl, Eigen::VectorXd::Zero(p_));
  w.ytwy = Eigen::VectorXd::Zero(nl);
  w.count = Eigen::VectorXd::Zero(nl);
  w.logdet = Eigen::VectorXd::Zero(nl);
  return w;
}

double LocationStats::quadratic(const Weighted& w, std::size_t s, const Eigen::VectorXd& beta) {
  const double q = w.ytwy(s) - 2.0 * beta.dot(w.xtwy[s]) + beta.dot(w.xtwx[s] * beta);
  return q > 0.0 ? q : 0.0;
}

double LocationStats::log_likelihood(const Weighted& w, std::size_t s, const Eigen::VectorXd& beta,
                                     double sigma2) {
  if (!(sigma2 > 0.0)) throw InvalidArgument("sigma2 must be > 0");
  const double n = w.count(s);
  return -0.5 * (n * std::log(2.0 * std::numbers::pi) + n * std::log(sigma2) - w.logdet(s) +
                 quadratic(w, s, beta) / sigma2);
}

}  // namespace bgwr
