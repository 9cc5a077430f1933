#pragma once

#include <vector>

#include <Eigen/Dense>

#include "bgwr/dataset.hpp"
#include "bgwr/weighting.hpp"

namespace bgwr {

// Kernel weights depend on an observation only through its location, so the
// weighted likelihood at every target location can be assembled from
// per-location cross products. This turns a bandwidth change into an
// O(L^2 p^2) update instead of O(L n p^2).
class LocationStats {
public:
  LocationStats(const Dataset& data, const DistanceMatrix& d);

  // Weighted statistics at every target location for one weight scheme.
  struct Weighted {
    std::vector<Eigen::MatrixXd> xtwx;
    std::vector<Eigen::VectorXd> xtwy;
    Eigen::VectorXd ytwy;
    Eigen::VectorXd count;   // n'(s): observations with positive weight
    Eigen::VectorXd logdet;  // sum of log w_i over those observations
  };

  Weighted weighted(const WeightScheme& scheme) const;
  /// Same with a likelihood that ignores the data (all statistics zero).
  Weighted flat() const;

  /// (y - X beta)^T W(s) (y - X beta), clamped at zero.
  static double quadratic(const Weighted& w, std::size_t s, const Eigen::VectorXd& beta);
  /// log MVN(y; X beta, sigma2 W(s)^-1) over positive-weight rows.
  static double log_likelihood(const Weighted& w, std::size_t s, const Eigen::VectorXd& beta, double sigma2);

  const LocationGroups& groups() const noexcept { return groups_; }
  std::size_t size() const noexcept { return groups_.size(); }
  std::size_t p() const noexcept { return p_; }
  /// Distance between fit locations k and l.
  double distance(std::size_t k, std::size_t l) const { return dist_(k, l); }

private:
  LocationGroups groups_;
  std::size_t p_;
  Eigen::MatrixXd dist_;
  std::vector<Eigen::MatrixXd> xtx_;
  std::vector<Eigen::VectorXd> xty_;
  std::vector<double> yty_;
};

}  // namespace bgwr
