#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace bgwr {

/// Distance value for pairs with no connecting path.
inline constexpr double kUnreachable = std::numeric_limits<double>::infinity();

inline bool is_reachable(double d) noexcept { return d != kUnreachable; }

using EdgeIds = std::pair<std::string, std::string>;

// Areal units as vertices, shared boundaries as undirected edges. Patch edges
// are manual additions (e.g. an island linked to the mainland) and end up in
// the edge set like any other edge.
class SpatialGraph {
public:
  /// Validates ids, rejects self-loops and unknown endpoints, removes duplicates.
  static SpatialGraph build(std::vector<std::string> vertices,
                            std::span<const EdgeIds> edges,
                            std::span<const EdgeIds> patches = {});

  std::size_t size() const noexcept { return vertices_.size(); }
  const std::vector<std::string>& vertices() const noexcept { return vertices_; }
  /// Normalized (i < j), sorted, unique.
  const std::vector<std::pair<std::size_t, std::size_t>>& edges() const noexcept { return edges_; }
  const std::vector<EdgeIds>& patches() const noexcept { return patches_; }
  const std::vector<std::size_t>& neighbors(std::size_t v) const { return adjacency_.at(v); }

  std::optional<std::size_t> find(std::string_view id) const;
  std::size_t index_of(std::string_view id) const;
  bool has_edge(std::size_t a, std::size_t b) const;

private:
  std::vector<std::string> vertices_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::pair<std::size_t, std::size_t>> edges_;
  std::vector<EdgeIds> patches_;
  std::vector<std::vector<std::size_t>> adjacency_;
};

enum class DistanceKind { graph, euclidean };

/// Symmetric all-pairs distances with zero diagonal; kUnreachable marks
/// disconnected pairs.
struct DistanceMatrix {
  std::vector<std::string> labels;
  Eigen::MatrixXd values;
  DistanceKind kind = DistanceKind::graph;

  std::size_t size() const noexcept { return labels.size(); }
  double operator()(std::size_t i, std::size_t j) const { return values(i, j); }
  std::optional<std::size_t> find(std::string_view id) const;
  std::size_t index_of(std::string_view id) const;
  /// Largest reachable off-diagonal entry (0 for a singleton).
  double max_finite() const;
  bool all_reachable() const;

  friend bool operator==(const DistanceMatrix& a, const DistanceMatrix& b);
};

/// Hop counts by breadth-first search from every vertex.
DistanceMatrix graph_distances(const SpatialGraph& g);

/// Planar distance sqrt(dlat^2 + dlon^2); coords are (latitude, longitude).
DistanceMatrix euclidean_distances(std::vector<std::string> labels,
                                   std::span<const std::pair<double, double>> coords);

struct MdsEmbedding {
  std::vector<std::string> labels;
  Eigen::MatrixX2d coords;
  Eigen::Vector2d eigenvalues;
};

/// Classical (Torgerson) MDS into two dimensions.
///
/// B = -1/2 J D^2 J is eigendecomposed and the two leading eigenvectors are
/// scaled by the square root of their eigenvalues. Negative eigenvalues are
/// clamped to zero. Each eigenvector is oriented so that its entry of largest
/// magnitude (first such index on ties) is positive, which makes the
/// embedding reproducible.
MdsEmbedding mds_embed(const DistanceMatrix& d);

}  // namespace bgwr
