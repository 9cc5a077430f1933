#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bgwr/spatial_graph.hpp"

namespace bgwr {

// Responses, covariates and the areal unit of every observation. When
// intercept_included is set, column 0 of X is the constant 1.
struct Dataset {
  Eigen::VectorXd y;
  Eigen::MatrixXd X;
  std::vector<std::string> location;
  std::vector<std::string> covariate_names;
  bool intercept_included = false;

  std::size_t n() const noexcept { return static_cast<std::size_t>(y.size()); }
  std::size_t p() const noexcept { return static_cast<std::size_t>(X.cols()); }

  /// Shape, finiteness and n >= p; throws InvalidArgument.
  void validate() const;
  /// Additionally checks every location is a label of d.
  void validate(const DistanceMatrix& d) const;
};

/// Prepends a constant column named "intercept".
Dataset with_intercept(Dataset data);

// Observations grouped by location. `locations` lists the distinct locations
// of the data in the label order of the distance matrix; `obs_group[i]`
// indexes into it and `label_index[k]` is the distance-matrix row of group k.
struct LocationGroups {
  std::vector<std::string> locations;
  std::vector<std::size_t> label_index;
  std::vector<std::size_t> obs_group;
  std::vector<std::vector<std::size_t>> members;

  std::size_t size() const noexcept { return locations.size(); }
};

LocationGroups group_locations(const Dataset& data, const DistanceMatrix& d);

}  // namespace bgwr
