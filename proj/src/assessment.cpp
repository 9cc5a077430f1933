#include "bgwr/assessment.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "bgwr/error.hpp"
#include "bgwr/local_stats.hpp"

namespace bgwr {
namespace {

// Pairwise summation keeps the reduction order fixed and the error small.
double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 8) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

void check_matches(const GwrPosterior& post, const LocationStats& stats) {
  if (post.draws == 0) throw InvalidArgument("posterior has no draws");
  if (post.locations != stats.groups().locations)
    throw InvalidArgument("posterior locations do not match the dataset");
  if (post.p != stats.p()) throw InvalidArgument("posterior coefficient count differs from p");
}

double deviance_at(const LocationStats& stats, const LocationStats::Weighted& w,
                   const Eigen::MatrixXd& beta, const Eigen::VectorXd& sigma2) {
  double total = 0.0;
  for (std::size_t s = 0; s < stats.size(); ++s)
    total += -2.0 * LocationStats::log_likelihood(w, s, beta.row(s).transpose(), sigma2(s));
  return total;
}

}  // namespace

double deviance(const Dataset& data, const Eigen::MatrixXd& beta, std::span<const double> sigma2,
                std::span<const WeightMatrix> weights) {
  const auto nl = static_cast<std::size_t>(beta.rows());
  if (sigma2.size() != nl || weights.size() != nl)
    throw InvalidArgument("beta, sigma2 and weights must cover the same locations");
  double total = 0.0;
  for (std::size_t s = 0; s < nl; ++s)
    total += -2.0 * log_likelihood_location(data, beta.row(s).transpose(), sigma2[s], weights[s]);
  return total;
}

ModelAssessment dic(const GwrPosterior& post, const Dataset& data, const DistanceMatrix& d) {
  const LocationStats stats(data, d);
  check_matches(post, stats);
  const std::size_t nl = stats.size();
  const std::size_t p = post.p;

  std::vector<double> devs(post.draws);
  Eigen::MatrixXd beta(nl, p);
  Eigen::VectorXd sigma2(nl);
  Eigen::MatrixXd beta_sum = Eigen::MatrixXd::Zero(nl, p);
  Eigen::VectorXd sigma2_sum = Eigen::VectorXd::Zero(nl);
  double b_sum = 0.0;
  for (std::size_t t = 0; t < post.draws; ++t) {
    for (std::size_t s = 0; s < nl; ++s) {
      for (std::size_t j = 0; j < p; ++j) beta(s, j) = post.beta_at(t, s, j);
      sigma2(s) = post.sigma2_at(t, s);
    }
    const auto w = stats.weighted({post.kernel, post.b[t]});
    devs[t] = deviance_at(stats, w, beta, sigma2);
    beta_sum += beta;
    sigma2_sum += sigma2;
    b_sum += post.b[t];
  }

  const double td = static_cast<double>(post.draws);
  ModelAssessment out;
  out.mean_deviance = pairwise_sum(devs) / td;
  const auto w_mean = stats.weighted({post.kernel, b_sum / td});
  out.deviance_at_mean = deviance_at(stats, w_mean, beta_sum / td, sigma2_sum / td);
  out.p_d = out.mean_deviance - out.deviance_at_mean;
  out.dic = out.deviance_at_mean + 2.0 * out.p_d;
  out.dic_alt = 2.0 * out.mean_deviance - out.deviance_at_mean;
  return out;
}

ModelAssessment cpo_lpml(const GwrPosterior& post, const Dataset& data, const DistanceMatrix& d) {
  const LocationGroups groups = group_locations(data, d);
  if (post.draws == 0) throw InvalidArgument("posterior has no draws");
  if (post.locations != groups.locations) throw InvalidArgument("posterior locations do not match the dataset");
  if (post.p != data.p()) throw InvalidArgument("posterior coefficient count differs from p");

  const double log_t = std::log(static_cast<double>(post.draws));
  const double half_log_2pi = 0.5 * std::log(2.0 * std::numbers::pi);
  ModelAssessment out;
  out.cpo.resize(data.n());
  out.log_cpo.resize(data.n());
  std::vector<double> neg_log_f(post.draws);
  for (std::size_t i = 0; i < data.n(); ++i) {
    const std::size_t l = groups.obs_group[i];
    for (std::size_t t = 0; t < post.draws; ++t) {
      double fitted = 0.0;
      for (std::size_t j = 0; j < post.p; ++j) fitted += data.X(i, j) * post.beta_at(t, l, j);
      const double s2 = post.sigma2_at(t, l);
      const double r = data.y(i) - fitted;
      neg_log_f[t] = half_log_2pi + 0.5 * std::log(s2) + 0.5 * r * r / s2;
    }
    // log CPO_i = log T - logsumexp_t(-log f_t)
    double m = -std::numeric_limits<double>::infinity();
    for (double v : neg_log_f) m = std::max(m, v);
    double acc = 0.0;
    for (double v : neg_log_f) acc += std::exp(v - m);
    out.log_cpo[i] = log_t - (m + std::log(acc));
    out.cpo[i] = std::exp(out.log_cpo[i]);
  }
  out.lpml = pairwise_sum(out.log_cpo);
  return out;
}

ModelAssessment assess(const GwrPosterior& post, const Dataset& data, const DistanceMatrix& d) {
  ModelAssessment out = dic(post, data, d);
  ModelAssessment c = cpo_lpml(post, data, d);
  out.cpo = std::move(c.cpo);
  out.log_cpo = std::move(c.log_cpo);
  out.lpml = c.lpml;
  return out;
}

}  // namespace bgwr
