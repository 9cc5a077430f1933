#include "bgwr/spatial_graph.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "bgwr/error.hpp"

namespace bgwr {

SpatialGraph SpatialGraph::build(std::vector<std::string> vertices,
                                 std::span<const EdgeIds> edges,
                                 std::span<const EdgeIds> patches) {
  if (vertices.empty()) throw InvalidArgument("graph needs at least one vertex");

  SpatialGraph g;
  g.vertices_ = std::move(vertices);
  for (std::size_t i = 0; i < g.vertices_.size(); ++i) {
    const auto& id = g.vertices_[i];
    if (id.empty()) throw InvalidArgument("empty vertex id");
    if (!g.index_.emplace(id, i).second) throw InvalidArgument("duplicate vertex id '" + id + "'");
  }

  auto add = [&g](const EdgeIds& e) {
    const auto a = g.find(e.first);
    const auto b = g.find(e.second);
    if (!a) throw InvalidArgument("edge references unknown vertex '" + e.first + "'");
    if (!b) throw InvalidArgument("edge references unknown vertex '" + e.second + "'");
    if (*a == *b) throw InvalidArgument("self-loop on vertex '" + e.first + "'");
    g.edges_.emplace_back(std::min(*a, *b), std::max(*a, *b));
  };
  for (const auto& e : edges) add(e);
  for (const auto& e : patches) {
    add(e);
    g.patches_.push_back(e);
  }

  std::sort(g.edges_.begin(), g.edges_.end());
  g.edges_.erase(std::unique(g.edges_.begin(), g.edges_.end()), g.edges_.end());

  g.adjacency_.assign(g.vertices_.size(), {});
  for (const auto& [a, b] : g.edges_) {
    g.adjacency_[a].push_back(b);
    g.adjacency_[b].push_back(a);
  }
  return g;
}

std::optional<std::size_t> SpatialGraph::find(std::string_view id) const {
  const auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t SpatialGraph::index_of(std::string_view id) const {
  if (auto i = find(id)) return *i;
  throw InvalidArgument("unknown vertex '" + std::string(id) + "'");
}

bool SpatialGraph::has_edge(std::size_t a, std::size_t b) const {
  const auto key = std::make_pair(std::min(a, b), std::max(a, b));
  return std::binary_search(edges_.begin(), edges_.end(), key);
}

std::optional<std::size_t> DistanceMatrix::find(std::string_view id) const {
  const auto it = std::find(labels.begin(), labels.end(), id);
  if (it == labels.end()) return std::nullopt;
  return static_cast<std::size_t>(it - labels.begin());
}

std::size_t DistanceMatrix::index_of(std::string_view id) const {
  if (auto i = find(id)) return *i;
  throw InvalidArgument("unknown location '" + std::string(id) + "'");
}

double DistanceMatrix::max_finite() const {
  double m = 0.0;
  for (Eigen::Index j = 0; j < values.cols(); ++j)
    for (Eigen::Index i = 0; i < values.rows(); ++i)
      if (is_reachable(values(i, j))) m = std::max(m, values(i, j));
  return m;
}

bool DistanceMatrix::all_reachable() const {
  return (values.array() != kUnreachable).all();
}

bool operator==(const DistanceMatrix& a, const DistanceMatrix& b) {
  return a.kind == b.kind && a.labels == b.labels && a.values.rows() == b.values.rows() &&
         a.values.cols() == b.values.cols() && (a.values.array() == b.values.array()).all();
}

DistanceMatrix graph_distances(const SpatialGraph& g) {
  const std::size_t n = g.size();
  DistanceMatrix d;
  d.labels = g.vertices();
  d.kind = DistanceKind::graph;
  d.values = Eigen::MatrixXd::Constant(n, n, kUnreachable);

  std::vector<int> hops(n);
  std::queue<std::size_t> frontier;
  for (std::size_t src = 0; src < n; ++src) {
    std::fill(hops.begin(), hops.end(), -1);
    hops[src] = 0;
    frontier.push(src);
    while (!frontier.empty()) {
      const std::size_t v = frontier.front();
      frontier.pop();
      for (std::size_t w : g.neighbors(v)) {
        if (hops[w] >= 0) continue;
        hops[w] = hops[v] + 1;
        frontier.push(w);
      }
    }
    for (std::size_t v = 0; v < n; ++v)
      if (hops[v] >= 0) d.values(src, v) = hops[v];
  }
  return d;
}

DistanceMatrix euclidean_distances(std::vector<std::string> labels,
                                   std::span<const std::pair<double, double>> coords) {
  if (labels.size() != coords.size())
    throw InvalidArgument("label count does not match coordinate count");
  for (const auto& [lat, lon] : coords)
    if (!std::isfinite(lat) || !std::isfinite(lon)) throw InvalidArgument("non-finite coordinate");

  const std::size_t n = coords.size();
  DistanceMatrix d;
  d.labels = std::move(labels);
  d.kind = DistanceKind::euclidean;
  d.values = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = std::hypot(coords[i].first - coords[j].first,
                                  coords[i].second - coords[j].second);
      d.values(i, j) = v;
      d.values(j, i) = v;
    }
  }
  return d;
}

MdsEmbedding mds_embed(const DistanceMatrix& d) {
  const auto n = static_cast<Eigen::Index>(d.size());
  if (n < 3) throw InvalidArgument("MDS needs at least 3 locations");
  if (!d.all_reachable()) throw InvalidArgument("MDS on a distance matrix with unreachable pairs");

  const Eigen::MatrixXd sq = d.values.array().square().matrix();
  const Eigen::MatrixXd centering =
      Eigen::MatrixXd::Identity(n, n) - Eigen::MatrixXd::Constant(n, n, 1.0 / static_cast<double>(n));
  Eigen::MatrixXd b = -0.5 * centering * sq * centering;
  b = 0.5 * (b + b.transpose());

  // Eigenvalues come back ascending.
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(b);
  if (eig.info() != Eigen::Success) throw Error("MDS eigendecomposition failed");

  MdsEmbedding out;
  out.labels = d.labels;
  out.coords.resize(n, 2);
  for (int k = 0; k < 2; ++k) {
    const Eigen::Index col = n - 1 - k;
    const double lambda = std::max(0.0, eig.eigenvalues()(col));
    Eigen::VectorXd v = eig.eigenvectors().col(col);

    Eigen::Index pivot = 0;
    for (Eigen::Index i = 1; i < n; ++i)
      if (std::abs(v(i)) > std::abs(v(pivot))) pivot = i;
    if (v(pivot) < 0) v = -v;

    out.eigenvalues(k) = lambda;
    out.coords.col(k) = v * std::sqrt(lambda);
  }
  return out;
}

}  // namespace bgwr
