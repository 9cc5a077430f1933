#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "bgwr/bayes_gwr.hpp"
#include "bgwr/dataset.hpp"
#include "bgwr/spatial_graph.hpp"
#include "bgwr/weighting.hpp"

namespace bgwr {

struct ModelAssessment {
  double dic = 0.0;      // deviance_at_mean + 2 p_d
  double dic_alt = 0.0;  // 2 mean_deviance - deviance_at_mean
  double p_d = 0.0;
  double mean_deviance = 0.0;
  double deviance_at_mean = 0.0;
  double lpml = 0.0;
  std::vector<double> cpo;
  std::vector<double> log_cpo;
};

/// sum_s -2 log MVN(y; X beta(s), sigma2(s) W(s)^-1). Row s of `beta`,
/// entry s of `sigma2` and `weights[s]` belong to the same target location.
double deviance(const Dataset& data, const Eigen::MatrixXd& beta, std::span<const double> sigma2,
                std::span<const WeightMatrix> weights);

/// DIC from the mean deviance over draws and the deviance at the posterior
/// means of beta(s), sigma2(s) and b. Both DIC forms are filled in.
ModelAssessment dic(const GwrPosterior& post, const Dataset& data, const DistanceMatrix& d);

/// CPO_i by the harmonic mean of f(y_i | x_i, beta_t(l(i)), sigma2_t(l(i)))
/// over draws, with unit self-weight; accumulated in the log domain.
ModelAssessment cpo_lpml(const GwrPosterior& post, const Dataset& data, const DistanceMatrix& d);

/// dic() and cpo_lpml() merged.
ModelAssessment assess(const GwrPosterior& post, const Dataset& data, const DistanceMatrix& d);

}  // namespace bgwr
