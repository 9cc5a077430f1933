#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "bgwr/bayes_gwr.hpp"
#include "bgwr/dataset.hpp"
#include "bgwr/spatial_graph.hpp"

namespace bgwr::io {

/// 17 significant digits (exact double round trip); "inf" for +infinity.
std::string format_double(double v);
/// Inverse of format_double; also accepts "Inf", "infinity".
double parse_double(std::string_view s, std::size_t line = 0);

std::vector<std::string> split_csv_line(std::string_view line);

struct DatasetOptions {
  bool log_response = false;
  bool standardize = false;  // covariates to zero mean and unit sample sd
  bool intercept = false;
};

/// CSV with header `location,y,x1,...,xp`. Errors carry the line number.
Dataset parse_dataset(std::istream& in, const DatasetOptions& opts = {});
Dataset read_dataset(const std::filesystem::path& path, const DatasetOptions& opts = {});

/// Column-wise zero mean and unit sample sd for every non-intercept column.
void standardize_covariates(Dataset& data);

// Adjacency file layout:
//
//   # comment
//   [vertices]
//   idA            one id per line; this order defines matrix label order
//   [edges]
//   idA,idB        one undirected edge per line
//
// Patch files are bare edge lists (`idA,idB` per line).
struct Adjacency {
  std::vector<std::string> vertices;
  std::vector<EdgeIds> edges;
};

Adjacency parse_adjacency(std::istream& in);
Adjacency read_adjacency(const std::filesystem::path& path);
std::vector<EdgeIds> parse_edge_list(std::istream& in);
std::vector<EdgeIds> read_edge_list(const std::filesystem::path& path);

/// Builds the graph from an adjacency file and an optional patch file.
SpatialGraph load_graph(const std::filesystem::path& adjacency, const std::filesystem::path& patches = {});

/// `location,region` CSV (header optional).
std::map<std::string, int> read_regions(const std::filesystem::path& path);

/// `location,latitude,longitude` CSV with header.
struct Coordinates {
  std::vector<std::string> labels;
  std::vector<std::pair<double, double>> lat_lon;
};
Coordinates read_coordinates(const std::filesystem::path& path);

// Distance CSV: header `<kind>,label1,...,labelN`, then one row per label
// `labelI,d(I,1),...,d(I,N)`; `inf` marks unreachable pairs.
void write_distance_csv(std::ostream& out, const DistanceMatrix& d);
DistanceMatrix parse_distance_csv(std::istream& in);

// Chain dump: first line `# kernel=<name>`, then a header
//   draw,b,gamma_1..gamma_p,tau2_1..tau2_p,
//   then per location L: sigma2@L,beta_1@L..beta_p@L
// and one row per retained draw.
void write_chain_csv(std::ostream& out, const GwrPosterior& post);
GwrPosterior parse_chain_csv(std::istream& in);

}  // namespace bgwr::io
