#include <doctest.h>

#include <cmath>
#include <random>

#include "bgwr/error.hpp"
#include "bgwr/weighting.hpp"
#include "test_support.hpp"

using namespace bgwr;

namespace {
const Kernel kAll[] = {Kernel::unity, Kernel::step, Kernel::exponential,
                       Kernel::gaussian, Kernel::bisquare, Kernel::graph_exp};
}

TEST_CASE("kernel point values at d = 6") {
  CHECK(kernel_weight({Kernel::graph_exp, 100.0}, 6.0) == doctest::Approx(0.9418).epsilon(0.0005 / 0.9418));
  CHECK(kernel_weight({Kernel::gaussian, 9.40}, 6.0) == doctest::Approx(0.665).epsilon(0.001 / 0.665));
}

TEST_CASE("kernel formulas") {
  CHECK(kernel_weight({Kernel::unity, 1.0}, 123.0) == 1.0);
  CHECK(kernel_weight({Kernel::step, 2.0}, 2.0) == 1.0);
  CHECK(kernel_weight({Kernel::step, 2.0}, 2.5) == 0.0);
  CHECK(kernel_weight({Kernel::exponential, 2.0}, 3.0) == doctest::Approx(std::exp(-1.5)));
  CHECK(kernel_weight({Kernel::gaussian, 2.0}, 3.0) == doctest::Approx(std::exp(-2.25)));
  CHECK(kernel_weight({Kernel::bisquare, 2.0}, 1.0) == doctest::Approx(0.5625));
  CHECK(kernel_weight({Kernel::bisquare, 2.0}, 2.0) == 0.0);
  CHECK(kernel_weight({Kernel::graph_exp, 5.0}, 3.0) == doctest::Approx(std::exp(-0.6)));
}

TEST_CASE("zero distance has weight one; unreachable has weight zero") {
  for (Kernel k : kAll) {
    CHECK(kernel_weight({k, 3.0}, 0.0) == 1.0);
    if (k != Kernel::unity) CHECK(kernel_weight({k, 3.0}, kUnreachable) == 0.0);
  }
}

TEST_CASE("graph_exp is exactly one at distances 0 and 1") {
  for (double b : {1e-3, 0.5, 1.0, 7.0, 1e6}) {
    CHECK(kernel_weight({Kernel::graph_exp, b}, 0.0) == 1.0);
    CHECK(kernel_weight({Kernel::graph_exp, b}, 1.0) == 1.0);
  }
}

TEST_CASE("weights are nonincreasing in distance and lie in [0,1]") {
  for (Kernel k : kAll)
    for (double b : {0.5, 1.0, 3.0, 40.0}) {
      double prev = 1.0;
      for (double d = 0.0; d <= 20.0; d += 0.05) {
        const double w = kernel_weight({k, b}, d);
        CHECK(w >= 0.0);
        CHECK(w <= 1.0);
        CHECK(w <= prev);
        prev = w;
      }
    }
}

TEST_CASE("decaying kernels grow with bandwidth and approach one") {
  for (Kernel k : {Kernel::exponential, Kernel::gaussian, Kernel::graph_exp})
    for (double d : {1.5, 3.0, 6.0}) {
      double prev = 0.0;
      for (double b = 0.1; b < 500.0; b *= 1.3) {
        const double w = kernel_weight({k, b}, d);
        CHECK(w >= prev);
        prev = w;
      }
      CHECK(kernel_weight({k, 1000.0 * d}, d) > 0.99);
    }
}

TEST_CASE("log weights agree with weights and never underflow") {
  CHECK(kernel_log_weight({Kernel::gaussian, 1.0}, 40.0) == doctest::Approx(-1600.0));
  CHECK(kernel_weight({Kernel::gaussian, 1.0}, 40.0) == 0.0);
  CHECK(std::isinf(kernel_log_weight({Kernel::step, 1.0}, 2.0)));
  for (Kernel k : kAll)
    for (double d : {0.0, 0.7, 2.0, 5.0})
      CHECK(std::exp(kernel_log_weight({k, 2.5}, d)) == doctest::Approx(kernel_weight({k, 2.5}, d)));
}

TEST_CASE("scheme validation and errors") {
  CHECK_THROWS_AS(kernel_weight({Kernel::gaussian, 1.0}, -0.1), InvalidArgument);
  CHECK_THROWS_AS((WeightScheme{Kernel::gaussian, 0.0}.validate()), InvalidArgument);
  CHECK_THROWS_AS((WeightScheme{Kernel::step, -1.0}.validate()), InvalidArgument);
  CHECK_NOTHROW((WeightScheme{Kernel::step, 0.0}.validate()));
  CHECK_NOTHROW((WeightScheme{Kernel::unity, 0.0}.validate()));
  CHECK(parse_kernel("graph_exp") == Kernel::graph_exp);
  CHECK(to_string(Kernel::bisquare) == "bisquare");
  CHECK_THROWS_AS(parse_kernel("cosine"), InvalidArgument);
}

TEST_CASE("weight matrix matches elementwise kernel evaluation") {
  const auto d = bgwr::testing::china_distances();
  std::mt19937_64 eng(2);
  std::vector<std::string> obs;
  for (int i = 0; i < 90; ++i) obs.push_back(d.labels[eng() % d.size()]);
  for (Kernel k : kAll)
    for (double b : {0.8, 2.0, 9.4, 100.0}) {
      const WeightScheme s{k, b};
      const auto w = weight_matrix(s, d, "Hubei", obs);
      CHECK(w.location == "Hubei");
      REQUIRE(w.size() == obs.size());
      for (std::size_t i = 0; i < obs.size(); ++i) {
        CHECK(w.weights[i] == kernel_weight(s, d(d.index_of("Hubei"), d.index_of(obs[i]))));
        if (obs[i] == "Hubei") CHECK(w.weights[i] == 1.0);
      }
    }
}

TEST_CASE("areal weights are constant within a location") {
  const auto d = bgwr::testing::china_distances();
  std::vector<std::string> obs;
  for (const auto& l : d.labels)
    for (int r = 0; r < 5; ++r) obs.push_back(l);
  const auto w = weight_matrix({Kernel::graph_exp, 100.0}, d, "Beijing", obs);
  for (std::size_t i = 0; i < obs.size(); i += 5)
    for (std::size_t r = 1; r < 5; ++r) CHECK(w.weights[i + r] == w.weights[i]);
  const auto u = weight_matrix({Kernel::unity, 1.0}, d, "Beijing", obs);
  for (double x : u.weights) CHECK(x == 1.0);
}

TEST_CASE("weight matrix rejects unknown locations") {
  const auto d = bgwr::testing::path_distances(3);
  const std::vector<std::string> obs{"L0", "Lx"};
  CHECK_THROWS_AS(weight_matrix({Kernel::unity, 1.0}, d, "L0", obs), InvalidArgument);
  const std::vector<std::string> ok{"L0"};
  CHECK_THROWS_AS(weight_matrix({Kernel::unity, 1.0}, d, "nowhere", ok), InvalidArgument);
}
