#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bgwr/dataset.hpp"
#include "bgwr/spatial_graph.hpp"
#include "bgwr/weighting.hpp"

namespace bgwr {

// Priors and chain settings for the Bayesian GWR sampler.
//
// beta_j(s) | gamma_j ~ (1 - gamma_j) N(0, tau2) + gamma_j N(0, c2 tau2)
// gamma_j ~ Bernoulli(inclusion_prior), sigma2(s) ~ IG(alpha1, alpha2),
// b ~ Uniform(0, prior_upper).
struct BayesConfig {
  double tau2 = 0.001;
  double c2 = 10000.0;
  double inclusion_prior = 0.5;
  double alpha1 = 0.01;
  double alpha2 = 0.01;
  double prior_upper = 100.0;  // D
  int chain_length = 4000;     // total sweeps, burn-in included
  int burn_in = 1000;
  std::uint64_t seed = 1;

  bool tau_hyperprior = false;      // tau2_j ~ IG(alpha1, alpha2) instead of fixed
  bool variable_selection = true;   // false: beta ~ N(0, beta_prior_var I), no gamma
  double beta_prior_var = 100.0;
  double intercept_prior_var = 1.0; // intercept column is never subject to selection

  // Proposal adaptation for b, burn-in only.
  double target_acceptance = 0.3;
  int adapt_interval = 50;

  // Hold components fixed instead of sampling them.
  std::optional<double> fixed_bandwidth;
  std::optional<std::vector<int>> fixed_gamma;
  std::optional<double> fixed_sigma2;
  /// Replace the likelihood by a constant (prior-recovery checks).
  bool prior_only = false;

  void validate() const;
};

// Post-burn-in draws. Shapes: beta [draw][location][coef], sigma2
// [draw][location], gamma/tau2 [draw][coef], b [draw].
struct GwrPosterior {
  std::vector<std::string> locations;
  Kernel kernel = Kernel::graph_exp;
  std::size_t draws = 0;
  std::size_t p = 0;
  std::vector<double> beta;
  std::vector<double> sigma2;
  std::vector<std::uint8_t> gamma;
  std::vector<double> tau2;
  std::vector<double> b;
  double acceptance_rate_b = 0.0;
  double proposal_scale_b = 0.0;

  std::size_t num_locations() const noexcept { return locations.size(); }
  double beta_at(std::size_t t, std::size_t l, std::size_t j) const {
    return beta[(t * num_locations() + l) * p + j];
  }
  double sigma2_at(std::size_t t, std::size_t l) const { return sigma2[t * num_locations() + l]; }
  int gamma_at(std::size_t t, std::size_t j) const { return gamma[t * p + j]; }

  std::vector<double> beta_samples(std::size_t l, std::size_t j) const;
  std::vector<double> sigma2_samples(std::size_t l) const;
  double inclusion_frequency(std::size_t j) const;
};

/// log MVN(y; X beta, sigma2 W^-1) restricted to observations with positive weight.
double log_likelihood_location(const Dataset& data, const Eigen::VectorXd& beta, double sigma2,
                               const WeightMatrix& w);

/// Gibbs sweeps over (gamma_j, beta_j(.)) blocks, beta(s), sigma2(s), plus a
/// reflected random-walk Metropolis step for the shared bandwidth.
GwrPosterior run_sampler(const Dataset& data, const DistanceMatrix& d, Kernel kernel,
                         const BayesConfig& cfg);

struct HpdInterval {
  double lower = 0.0;
  double upper = 0.0;
  double mass = 0.95;
};

/// Shortest window over sorted samples holding ceil(mass * T) of them.
HpdInterval hpd_interval(std::span<const double> samples, double mass = 0.95);

struct PosteriorSummary {
  std::vector<std::string> locations;
  Eigen::MatrixXd beta_mean;                   // locations x p
  std::vector<std::vector<HpdInterval>> beta_hpd;  // [location][coef]
  Eigen::VectorXd sigma2_mean;
  std::vector<double> inclusion_frequency;
  std::vector<int> gamma_mode;
  double b_mean = 0.0;
};

PosteriorSummary posterior_summary(const GwrPosterior& post, double mass = 0.95);

/// 0-based indices whose inclusion frequency is >= 0.5.
std::vector<std::size_t> selected_model(std::span<const double> inclusion_frequency);
std::vector<std::size_t> selected_model(const GwrPosterior& post);

}  // namespace bgwr
