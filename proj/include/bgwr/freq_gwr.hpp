#pragma once

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bgwr/dataset.hpp"
#include "bgwr/spatial_graph.hpp"
#include "bgwr/weighting.hpp"

namespace bgwr {

/// Systems whose X^T W X has reciprocal condition number below this are singular.
inline constexpr double kMinReciprocalCondition = 1e-12;

/// Weighted least squares: argmin_b sum_i w_i (y_i - x_i^T b)^2.
///
/// Solved by Householder QR of sqrt(W) X over the positive-weight rows. Throws
/// SingularSystemError (naming w.location) when fewer than p rows carry weight
/// or rcond(X^T W X) < kMinReciprocalCondition.
Eigen::VectorXd wls_fit(const Dataset& data, const WeightMatrix& w);

struct FreqFit {
  std::vector<std::string> locations;
  Eigen::MatrixXd beta_hat;  // one row per location
  double sse = 0.0;
  WeightScheme scheme;
  double effective_params = 0.0;
};

/// One WLS fit per distinct data location; SSE counts each observation against
/// the fit of its own location.
FreqFit fit_all_locations(const Dataset& data, const WeightScheme& scheme, const DistanceMatrix& d);

/// trace(S) with row i of S equal to x_i^T (X^T W(l(i)) X)^-1 X^T W(l(i)).
double effective_params_freq(const Dataset& data, const WeightScheme& scheme, const DistanceMatrix& d);

enum class BandwidthCriterion {
  sse,    // in-sample sum of squared errors
  loocv,  // leave-one-out: sum_i (e_i / (1 - h_ii))^2
};

BandwidthCriterion parse_bandwidth_criterion(std::string_view name);
std::string_view to_string(BandwidthCriterion c) noexcept;

struct BandwidthSelection {
  double best = 0.0;
  std::vector<double> grid;
  std::vector<double> score;  // NaN where the fit was singular
};

/// Grid search; ties go to the smaller bandwidth. Throws when every grid point is singular.
BandwidthSelection select_bandwidth_grid(const Dataset& data, Kernel kernel, const DistanceMatrix& d,
                                         std::span<const double> grid,
                                         BandwidthCriterion criterion = BandwidthCriterion::sse);

/// 40 log-spaced points on [0.1 d_max, 10 d_max], d_max the largest finite distance.
std::vector<double> default_bandwidth_grid(const DistanceMatrix& d, int points = 40);

}  // namespace bgwr
