#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "bgwr/spatial_graph.hpp"

namespace bgwr {

enum class Kernel { unity, step, exponential, gaussian, bisquare, graph_exp };

Kernel parse_kernel(std::string_view name);
std::string_view to_string(Kernel k) noexcept;

// Kernel plus its scale. For `step` the bandwidth is the distance threshold
// (zero allowed); every other kernel except `unity` needs bandwidth > 0.
struct WeightScheme {
  Kernel kernel = Kernel::graph_exp;
  double bandwidth = 1.0;

  void validate() const;
};

/// w = f(d | b) in [0, 1]. Unreachable distances give 0.
double kernel_weight(const WeightScheme& scheme, double distance);

/// log f(d | b), exact even where f underflows to 0.0. Returns -inf outside
/// the kernel support (step beyond threshold, bisquare at d >= b, unreachable).
double kernel_log_weight(const WeightScheme& scheme, double distance);

// Diagonal of W(s): one weight per observation for target location s.
// log_weights carries the exact log of each weight; an observation is part of
// the likelihood at s iff its log weight is finite.
struct WeightMatrix {
  std::string location;
  std::vector<double> weights;
  std::vector<double> log_weights;

  std::size_t size() const noexcept { return weights.size(); }
  bool positive(std::size_t i) const;
  double log_weight(std::size_t i) const;
};

WeightMatrix weight_matrix(const WeightScheme& scheme, const DistanceMatrix& d,
                           std::string_view target,
                           std::span<const std::string> obs_locations);

}  // namespace bgwr
