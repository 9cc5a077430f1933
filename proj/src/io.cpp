#include "bgwr/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "bgwr/error.hpp"

namespace bgwr::io {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

bool skippable(std::string_view line) {
  line = trim(line);
  return line.empty() || line.front() == '#';
}

std::ifstream open(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  return in;
}

}  // namespace

std::string format_double(double v) {
  if (v == std::numeric_limits<double>::infinity()) return "inf";
  if (v == -std::numeric_limits<double>::infinity()) return "-inf";
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(std::string_view s, std::size_t line) {
  s = trim(s);
  if (s == "inf" || s == "Inf" || s == "infinity") return std::numeric_limits<double>::infinity();
  if (s == "-inf" || s == "-Inf") return -std::numeric_limits<double>::infinity();
  if (s == "nan" || s == "NaN") return std::numeric_limits<double>::quiet_NaN();
  double v = 0.0;
  const char* first = s.data();
  if (!s.empty() && s.front() == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
    throw ParseError("non-numeric cell '" + std::string(s) + "'", line);
  return v;
}

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    cells.emplace_back(trim(line.substr(start, comma == std::string_view::npos ? comma : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

Dataset parse_dataset(std::istream& in, const DatasetOptions& opts) {
  std::string line;
  std::size_t lineno = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++lineno;
    if (skippable(line)) continue;
    header = split_csv_line(line);
    break;
  }
  if (header.size() < 3 || header[0] != "location" || header[1] != "y")
    throw ParseError("expected header 'location,y,x1,...,xp'", lineno);
  const std::size_t p = header.size() - 2;

  std::vector<std::string> locations;
  std::vector<double> ys, xs;
  while (std::getline(in, line)) {
    ++lineno;
    if (skippable(line)) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != header.size())
      throw ParseError("expected " + std::to_string(header.size()) + " cells, got " +
                           std::to_string(cells.size()),
                       lineno);
    if (cells[0].empty()) throw ParseError("empty location id", lineno);
    locations.push_back(cells[0]);
    const double y = parse_double(cells[1], lineno);
    if (!std::isfinite(y)) throw ParseError("non-finite response", lineno);
    if (opts.log_response && !(y > 0.0)) throw ParseError("log response needs y > 0", lineno);
    ys.push_back(opts.log_response ? std::log(y) : y);
    for (std::size_t j = 0; j < p; ++j) {
      const double x = parse_double(cells[2 + j], lineno);
      if (!std::isfinite(x)) throw ParseError("non-finite covariate", lineno);
      xs.push_back(x);
    }
  }
  if (ys.empty()) throw ParseError("empty dataset");

  Dataset data;
  const auto n = static_cast<Eigen::Index>(ys.size());
  data.y = Eigen::Map<const Eigen::VectorXd>(ys.data(), n);
  data.X = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      xs.data(), n, static_cast<Eigen::Index>(p));
  data.location = std::move(locations);
  data.covariate_names.assign(header.begin() + 2, header.end());
  if (opts.standardize) standardize_covariates(data);
  if (opts.intercept) data = with_intercept(std::move(data));
  data.validate();
  return data;
}

Dataset read_dataset(const std::filesystem::path& path, const DatasetOptions& opts) {
  auto in = open(path);
  return parse_dataset(in, opts);
}

void standardize_covariates(Dataset& data) {
  const Eigen::Index n = data.X.rows();
  if (n < 2) throw InvalidArgument("standardization needs at least 2 rows");
  for (Eigen::Index j = data.intercept_included ? 1 : 0; j < data.X.cols(); ++j) {
    auto col = data.X.col(j);
    const double mean = col.mean();
    col.array() -= mean;
    const double sd = std::sqrt(col.squaredNorm() / static_cast<double>(n - 1));
    if (!(sd > 0.0)) throw InvalidArgument("cannot standardize a constant covariate");
    col /= sd;
    col.array() -= col.mean();
  }
}

Adjacency parse_adjacency(std::istream& in) {
  enum class Section { none, vertices, edges } section = Section::none;
  Adjacency adj;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (skippable(line)) continue;
    const auto t = trim(line);
    if (t == "[vertices]") {
      section = Section::vertices;
    } else if (t == "[edges]") {
      section = Section::edges;
    } else if (section == Section::vertices) {
      if (t.find(',') != std::string_view::npos) throw ParseError("vertex id contains a comma", lineno);
      adj.vertices.emplace_back(t);
    } else if (section == Section::edges) {
      const auto cells = split_csv_line(t);
      if (cells.size() != 2) throw ParseError("edge line must be 'idA,idB'", lineno);
      adj.edges.emplace_back(cells[0], cells[1]);
    } else {
      throw ParseError("content before a [vertices] or [edges] section", lineno);
    }
  }
  if (adj.vertices.empty()) throw ParseError("adjacency file declares no vertices");
  return adj;
}

Adjacency read_adjacency(const std::filesystem::path& path) {
  auto in = open(path);
  return parse_adjacency(in);
}

std::vector<EdgeIds> parse_edge_list(std::istream& in) {
  std::vector<EdgeIds> edges;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (skippable(line)) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != 2) throw ParseError("edge line must be 'idA,idB'", lineno);
    edges.emplace_back(cells[0], cells[1]);
  }
  return edges;
}

std::vector<EdgeIds> read_edge_list(const std::filesystem::path& path) {
  auto in = open(path);
  return parse_edge_list(in);
}

SpatialGraph load_graph(const std::filesystem::path& adjacency, const std::filesystem::path& patches) {
  Adjacency adj = read_adjacency(adjacency);
  std::vector<EdgeIds> extra;
  if (!patches.empty()) extra = read_edge_list(patches);
  return SpatialGraph::build(std::move(adj.vertices), adj.edges, extra);
}

std::map<std::string, int> read_regions(const std::filesystem::path& path) {
  auto in = open(path);
  std::map<std::string, int> regions;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (skippable(line)) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != 2) throw ParseError("expected 'location,region'", lineno);
    if (cells[0] == "location") continue;
    const double r = parse_double(cells[1], lineno);
    if (r != std::floor(r) || r < 0) throw ParseError("region must be a non-negative integer", lineno);
    regions[cells[0]] = static_cast<int>(r);
  }
  return regions;
}

Coordinates read_coordinates(const std::filesystem::path& path) {
  auto in = open(path);
  Coordinates c;
  std::string line;
  std::size_t lineno = 0;
  bool header = true;
  while (std::getline(in, line)) {
    ++lineno;
    if (skippable(line)) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != 3) throw ParseError("expected 'location,latitude,longitude'", lineno);
    if (header) {
      header = false;
      continue;
    }
    c.labels.push_back(cells[0]);
    c.lat_lon.emplace_back(parse_double(cells[1], lineno), parse_double(cells[2], lineno));
  }
  return c;
}

void write_distance_csv(std::ostream& out, const DistanceMatrix& d) {
  out << (d.kind == DistanceKind::graph ? "graph" : "euclidean");
  for (const auto& l : d.labels) out << ',' << l;
  out << '\n';
  for (std::size_t i = 0; i < d.size(); ++i) {
    out << d.labels[i];
    for (std::size_t j = 0; j < d.size(); ++j) out << ',' << format_double(d(i, j));
    out << '\n';
  }
}

DistanceMatrix parse_distance_csv(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  DistanceMatrix d;
  bool have_header = false;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    ++lineno;
    if (skippable(line)) continue;
    auto cells = split_csv_line(line);
    if (!have_header) {
      if (cells[0] == "graph") d.kind = DistanceKind::graph;
      else if (cells[0] == "euclidean") d.kind = DistanceKind::euclidean;
      else throw ParseError("first header cell must be 'graph' or 'euclidean'", lineno);
      d.labels.assign(cells.begin() + 1, cells.end());
      have_header = true;
      continue;
    }
    if (cells.size() != d.labels.size() + 1) throw ParseError("distance row has wrong width", lineno);
    if (rows.size() >= d.labels.size() || cells[0] != d.labels[rows.size()])
      throw ParseError("row label does not follow header order", lineno);
    std::vector<double> row;
    for (std::size_t j = 1; j < cells.size(); ++j) row.push_back(parse_double(cells[j], lineno));
    rows.push_back(std::move(row));
  }
  if (!have_header || rows.size() != d.labels.size()) throw ParseError("incomplete distance matrix");
  const auto n = static_cast<Eigen::Index>(rows.size());
  d.values.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) d.values(i, j) = rows[i][j];
  return d;
}

void write_chain_csv(std::ostream& out, const GwrPosterior& post) {
  out << "# kernel=" << to_string(post.kernel) << '\n';
  out << "draw,b";
  for (std::size_t j = 0; j < post.p; ++j) out << ",gamma_" << j + 1;
  for (std::size_t j = 0; j < post.p; ++j) out << ",tau2_" << j + 1;
  for (const auto& loc : post.locations) {
    out << ",sigma2@" << loc;
    for (std::size_t j = 0; j < post.p; ++j) out << ",beta_" << j + 1 << '@' << loc;
  }
  out << '\n';
  const std::size_t nl = post.num_locations();
  for (std::size_t t = 0; t < post.draws; ++t) {
    out << t << ',' << format_double(post.b[t]);
    for (std::size_t j = 0; j < post.p; ++j) out << ',' << post.gamma_at(t, j);
    for (std::size_t j = 0; j < post.p; ++j) out << ',' << format_double(post.tau2[t * post.p + j]);
    for (std::size_t l = 0; l < nl; ++l) {
      out << ',' << format_double(post.sigma2_at(t, l));
      for (std::size_t j = 0; j < post.p; ++j) out << ',' << format_double(post.beta_at(t, l, j));
    }
    out << '\n';
  }
}

GwrPosterior parse_chain_csv(std::istream& in) {
  GwrPosterior post;
  std::string line;
  std::size_t lineno = 0;

  if (!std::getline(in, line)) throw ParseError("empty chain file");
  ++lineno;
  const std::string_view meta = trim(line);
  constexpr std::string_view prefix = "# kernel=";
  if (meta.substr(0, prefix.size()) != prefix) throw ParseError("missing '# kernel=' line", lineno);
  post.kernel = parse_kernel(meta.substr(prefix.size()));

  if (!std::getline(in, line)) throw ParseError("missing chain header");
  ++lineno;
  const auto header = split_csv_line(line);
  if (header.size() < 2 || header[0] != "draw" || header[1] != "b") throw ParseError("bad chain header", lineno);
  std::size_t p = 0;
  while (2 + p < header.size() && header[2 + p].rfind("gamma_", 0) == 0) ++p;
  if (p == 0) throw ParseError("chain header has no gamma columns", lineno);
  const std::size_t loc_start = 2 + 2 * p;
  if (header.size() < loc_start || (header.size() - loc_start) % (p + 1) != 0)
    throw ParseError("chain header has an inconsistent column count", lineno);
  const std::size_t nl = (header.size() - loc_start) / (p + 1);
  for (std::size_t l = 0; l < nl; ++l) {
    const std::string& col = header[loc_start + l * (p + 1)];
    if (col.rfind("sigma2@", 0) != 0) throw ParseError("expected a sigma2@<location> column", lineno);
    post.locations.push_back(col.substr(7));
  }
  post.p = p;

  while (std::getline(in, line)) {
    ++lineno;
    if (skippable(line)) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != header.size()) throw ParseError("chain row has wrong width", lineno);
    post.b.push_back(parse_double(cells[1], lineno));
    for (std::size_t j = 0; j < p; ++j) {
      const double g = parse_double(cells[2 + j], lineno);
      if (g != 0.0 && g != 1.0) throw ParseError("gamma must be 0 or 1", lineno);
      post.gamma.push_back(static_cast<std::uint8_t>(g));
    }
    for (std::size_t j = 0; j < p; ++j) post.tau2.push_back(parse_double(cells[2 + p + j], lineno));
    for (std::size_t l = 0; l < nl; ++l) {
      const std::size_t base = loc_start + l * (p + 1);
      post.sigma2.push_back(parse_double(cells[base], lineno));
      for (std::size_t j = 0; j < p; ++j) post.beta.push_back(parse_double(cells[base + 1 + j], lineno));
    }
    ++post.draws;
  }
  // sigma2 and beta were appended location-major within each draw, matching the in-memory layout.
  return post;
}

}  // namespace bgwr::io
