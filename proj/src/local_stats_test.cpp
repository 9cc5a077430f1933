#include <doctest.h>

#include "bgwr/bayes_gwr.hpp"
#include "bgwr/local_stats.hpp"
#include "test_support.hpp"

using namespace bgwr;

TEST_CASE("weighted sufficient statistics equal dense weighted products") {
  const auto d = bgwr::testing::china_distances();
  Eigen::VectorXd beta(3);
  beta << 1.0, -0.5, 2.0;
  const Dataset data = bgwr::testing::gaussian_dataset(d, 3, beta, 0.7, 4);
  const LocationStats stats(data, d);
  for (const WeightScheme scheme : {WeightScheme{Kernel::graph_exp, 3.0}, WeightScheme{Kernel::bisquare, 2.5},
                                    WeightScheme{Kernel::step, 1.0}}) {
    const auto w = stats.weighted(scheme);
    for (std::size_t s : {0, 7, 29}) {
      const auto wm = weight_matrix(scheme, d, stats.groups().locations[s], data.location);
      const Eigen::VectorXd wv = Eigen::Map<const Eigen::VectorXd>(wm.weights.data(), data.n());
      const Eigen::MatrixXd xtwx = data.X.transpose() * wv.asDiagonal() * data.X;
      CHECK((w.xtwx[s] - xtwx).cwiseAbs().maxCoeff() < 1e-10);
      CHECK((w.xtwy[s] - data.X.transpose() * wv.asDiagonal() * data.y).cwiseAbs().maxCoeff() < 1e-10);
      CHECK(w.count(s) == static_cast<double>((wv.array() > 0).count()));

      const Eigen::VectorXd b = Eigen::Vector3d(0.3, 0.1, -1.0);
      const double direct = log_likelihood_location(data, b, 1.7, wm);
      CHECK(LocationStats::log_likelihood(w, s, b, 1.7) == doctest::Approx(direct).epsilon(1e-10));
    }
  }
}

TEST_CASE("log determinant survives weights that underflow") {
  const auto d = bgwr::testing::path_distances(40);
  const Dataset data = bgwr::testing::gaussian_dataset(d, 2, Eigen::Vector2d(1, 1), 1.0, 1);
  const LocationStats stats(data, d);
  const auto w = stats.weighted({Kernel::gaussian, 1.0});
  CHECK(w.count(0) == 80.0);
  CHECK(std::isfinite(w.logdet(0)));
  CHECK(w.logdet(0) < -1000.0);
}

TEST_CASE("flat statistics give a constant likelihood") {
  const auto d = bgwr::testing::path_distances(3);
  const Dataset data = bgwr::testing::gaussian_dataset(d, 2, Eigen::Vector2d(1, 1), 1.0, 1);
  const auto f = LocationStats(data, d).flat();
  CHECK(LocationStats::log_likelihood(f, 1, Eigen::Vector2d(5, 5), 3.0) == 0.0);
}
