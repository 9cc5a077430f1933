#include <doctest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "bgwr/bayes_gwr.hpp"
#include "bgwr/error.hpp"
#include "bgwr/io.hpp"
#include "test_support.hpp"

using namespace bgwr;

TEST_CASE("doubles round-trip through text") {
  std::mt19937_64 eng(1);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const double v = u(eng) * std::pow(10.0, double(int(eng() % 40) - 20));
    CHECK(io::parse_double(io::format_double(v)) == v);
  }
  CHECK(io::format_double(kUnreachable) == "inf");
  CHECK(io::parse_double("inf") == kUnreachable);
  CHECK_THROWS_AS(io::parse_double("1.5x"), ParseError);
  CHECK_THROWS_AS(io::parse_double(""), ParseError);
}

TEST_CASE("dataset parsing") {
  std::stringstream in("location,y,x1,x2\nA,1.5,0.1,2\nB,2.5,0.3,4\n# note\nA,3,0.5,5\n");
  const Dataset data = io::parse_dataset(in);
  CHECK(data.n() == 3);
  CHECK(data.p() == 2);
  CHECK(data.covariate_names == std::vector<std::string>{"x1", "x2"});
  CHECK(data.location == std::vector<std::string>{"A", "B", "A"});
  CHECK(data.X(2, 1) == 5.0);

  std::stringstream only("location,y,x1\n");
  CHECK_THROWS_WITH_AS(io::parse_dataset(only), "empty dataset", ParseError);

  std::stringstream ragged("location,y,x1\nA,1,2\nB,1\n");
  try {
    io::parse_dataset(ragged);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }

  std::stringstream word("location,y,x1\nA,1,abc\n");
  CHECK_THROWS_WITH_AS(io::parse_dataset(word), "line 2: non-numeric cell 'abc'", ParseError);

  std::stringstream bad_header("site,y,x1\nA,1,2\n");
  CHECK_THROWS_AS(io::parse_dataset(bad_header), ParseError);
}

TEST_CASE("log response and standardization") {
  std::stringstream text;
  text << "location,y,x1,x2\n";
  std::mt19937_64 eng(2);
  std::normal_distribution<double> z(5.0, 3.0);
  for (int i = 0; i < 150; ++i) text << "L" << i % 30 << ',' << std::exp(0.01 * i) << ',' << z(eng) << ',' << 100 + 7 * z(eng) << '\n';
  std::stringstream copy(text.str());
  const Dataset data = io::parse_dataset(text, {.log_response = true, .standardize = true, .intercept = true});
  CHECK(data.n() == 150);
  CHECK(data.p() == 3);
  CHECK(data.y(100) == doctest::Approx(1.0));
  CHECK((data.X.col(0).array() == 1.0).all());
  for (int j = 1; j < 3; ++j) {
    const double mean = data.X.col(j).mean();
    const double sd = std::sqrt((data.X.col(j).array() - mean).square().sum() / 149.0);
    CHECK(std::abs(mean) < 1e-12);
    CHECK(std::abs(sd - 1.0) < 1e-12);
  }
  std::stringstream neg("location,y,x1\nA,-1,2\n");
  CHECK_THROWS_AS(io::parse_dataset(neg, {.log_response = true}), ParseError);
}

TEST_CASE("distance matrices round-trip through CSV") {
  for (const DistanceMatrix& d :
       {bgwr::testing::china_distances(),
        graph_distances(SpatialGraph::build({"a", "b", "c"}, std::vector<EdgeIds>{{"a", "b"}})),
        euclidean_distances({"p", "q"}, std::vector<std::pair<double, double>>{{0.1, 0.2}, {1.0 / 3.0, 7.7}})}) {
    std::stringstream buf;
    io::write_distance_csv(buf, d);
    CHECK(io::parse_distance_csv(buf) == d);
  }
  std::stringstream bad("graph,a,b\na,0,1\n");
  CHECK_THROWS_AS(io::parse_distance_csv(bad), ParseError);
}

TEST_CASE("adjacency files") {
  std::stringstream in("# comment\n[vertices]\nA\nB\nC\n[edges]\nA,B\nB,C\n");
  const auto adj = io::parse_adjacency(in);
  CHECK(adj.vertices == std::vector<std::string>{"A", "B", "C"});
  CHECK(adj.edges.size() == 2);
  std::stringstream stray("A,B\n");
  CHECK_THROWS_AS(io::parse_adjacency(stray), ParseError);

  const auto dir = bgwr::testing::data_dir() / "china";
  const auto g = io::load_graph(dir / "adjacency.txt", dir / "patches.csv");
  CHECK(g.size() == 30);
  CHECK(g.has_edge(g.index_of("Hainan"), g.index_of("Guangdong")));
  const auto unpatched = io::load_graph(dir / "adjacency.txt");
  CHECK_FALSE(graph_distances(unpatched).all_reachable());

  const auto regions = io::read_regions(dir / "regions.csv");
  CHECK(regions.size() == 30);
  for (const auto& [loc, r] : regions) {
    CHECK(g.find(loc).has_value());
    CHECK((r >= 0 && r <= 3));
  }
}

TEST_CASE("coordinates file") {
  const auto dir = bgwr::testing::scratch_dir("coords");
  std::ofstream(dir / "c.csv") << "location,latitude,longitude\nA,0,0\nB,3,4\n";
  const auto c = io::read_coordinates(dir / "c.csv");
  CHECK(c.labels == std::vector<std::string>{"A", "B"});
  CHECK(euclidean_distances(c.labels, c.lat_lon)(0, 1) == 5.0);
  CHECK_THROWS_AS(io::read_coordinates(dir / "missing.csv"), Error);
}

TEST_CASE("chains round-trip through CSV") {
  const auto d = bgwr::testing::path_distances(3);
  const Dataset data = bgwr::testing::gaussian_dataset(d, 4, Eigen::Vector2d(1, 0), 1.0, 3);
  BayesConfig cfg;
  cfg.chain_length = 60;
  cfg.burn_in = 10;
  const auto post = run_sampler(data, d, Kernel::gaussian, cfg);
  std::stringstream buf;
  io::write_chain_csv(buf, post);
  const auto back = io::parse_chain_csv(buf);
  CHECK(back.kernel == Kernel::gaussian);
  CHECK(back.locations == post.locations);
  CHECK(back.draws == post.draws);
  CHECK(back.p == post.p);
  CHECK(back.beta == post.beta);
  CHECK(back.sigma2 == post.sigma2);
  CHECK(back.gamma == post.gamma);
  CHECK(back.tau2 == post.tau2);
  CHECK(back.b == post.b);

  std::stringstream bad("draw,b,gamma_1\n");
  CHECK_THROWS_AS(io::parse_chain_csv(bad), ParseError);
}
