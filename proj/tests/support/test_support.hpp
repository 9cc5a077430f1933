#pragma once

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bgwr/dataset.hpp"
#include "bgwr/io.hpp"
#include "bgwr/spatial_graph.hpp"

namespace bgwr::testing {

inline std::filesystem::path data_dir() { return BGWR_DATA_DIR; }

inline DistanceMatrix china_distances() {
  const auto dir = data_dir() / "china";
  return graph_distances(io::load_graph(dir / "adjacency.txt", dir / "patches.csv"));
}

inline std::vector<std::string> numbered_labels(std::size_t n, const std::string& prefix = "L") {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

// Path graph L0 - L1 - ... - L{n-1}.
inline DistanceMatrix path_distances(std::size_t n) {
  const auto labels = numbered_labels(n);
  std::vector<EdgeIds> edges;
  for (std::size_t i = 0; i + 1 < n; ++i) edges.emplace_back(labels[i], labels[i + 1]);
  return graph_distances(SpatialGraph::build(labels, edges));
}

// Gaussian design, `per` rows at every location of d, y = X beta + sd * noise.
inline Dataset gaussian_dataset(const DistanceMatrix& d, std::size_t per, const Eigen::VectorXd& beta,
                                double sd, std::uint64_t seed) {
  std::mt19937_64 eng(seed);
  std::normal_distribution<double> z;
  const std::size_t n = d.size() * per;
  Dataset data;
  data.X.resize(static_cast<Eigen::Index>(n), beta.size());
  data.y.resize(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    data.location.push_back(d.labels[i / per]);
    for (Eigen::Index j = 0; j < beta.size(); ++j) data.X(static_cast<Eigen::Index>(i), j) = z(eng);
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    data.y(r) = data.X.row(r).dot(beta) + sd * z(eng);
  }
  for (Eigen::Index j = 0; j < beta.size(); ++j) data.covariate_names.push_back("x" + std::to_string(j + 1));
  return data;
}

inline std::filesystem::path scratch_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("bgwr_test_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

}  // namespace bgwr::testing
