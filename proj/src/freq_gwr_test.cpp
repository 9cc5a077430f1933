#include <doctest.h>

#include <random>

#include "bgwr/error.hpp"
#include "bgwr/freq_gwr.hpp"
#include "test_support.hpp"

using namespace bgwr;

namespace {

Dataset random_instance(std::mt19937_64& eng, std::size_t n, std::size_t p) {
  std::normal_distribution<double> z;
  Dataset data;
  data.X.resize(n, p);
  data.y.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    data.y(i) = z(eng);
    for (std::size_t j = 0; j < p; ++j) data.X(i, j) = z(eng);
    data.location.push_back("s");
  }
  return data;
}

WeightMatrix random_weights(std::mt19937_64& eng, std::size_t n) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  WeightMatrix w;
  w.location = "s";
  for (std::size_t i = 0; i < n; ++i) w.weights.push_back(u(eng));
  w.log_weights.resize(n);
  for (std::size_t i = 0; i < n; ++i) w.log_weights[i] = std::log(w.weights[i]);
  return w;
}

WeightMatrix scaled(WeightMatrix w, double c) {
  for (auto& v : w.weights) v *= c;
  for (auto& v : w.log_weights) v += std::log(c);
  return w;
}

}  // namespace

TEST_CASE("two-covariate fit matches explicit 2x2 normal equations") {
  std::mt19937_64 eng(17);
  for (int rep = 0; rep < 20; ++rep) {
    const Dataset data = random_instance(eng, 6, 2);
    const WeightMatrix w = random_weights(eng, 6);
    double a = 0, b = 0, c = 0, r0 = 0, r1 = 0;
    for (int i = 0; i < 6; ++i) {
      const double x0 = data.X(i, 0), x1 = data.X(i, 1), wi = w.weights[i];
      a += wi * x0 * x0;
      b += wi * x0 * x1;
      c += wi * x1 * x1;
      r0 += wi * x0 * data.y(i);
      r1 += wi * x1 * data.y(i);
    }
    const double det = a * c - b * b;
    const Eigen::VectorXd beta = wls_fit(data, w);
    CHECK(std::abs(beta(0) - (c * r0 - b * r1) / det) < 1e-10);
    CHECK(std::abs(beta(1) - (a * r1 - b * r0) / det) < 1e-10);
  }
}

TEST_CASE("identity weights give ordinary least squares") {
  std::mt19937_64 eng(3);
  const Dataset data = random_instance(eng, 15, 4);
  WeightMatrix w{"s", std::vector<double>(15, 1.0), std::vector<double>(15, 0.0)};
  const Eigen::VectorXd ols = data.X.colPivHouseholderQr().solve(data.y);
  CHECK((wls_fit(data, w) - ols).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("exact data are interpolated") {
  std::mt19937_64 eng(4);
  Dataset data = random_instance(eng, 10, 3);
  data.y = data.X * Eigen::Vector3d(1.0, -2.0, 0.5);
  const WeightMatrix w = random_weights(eng, 10);
  const Eigen::VectorXd beta = wls_fit(data, w);
  CHECK((data.y - data.X * beta).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("weighted residuals are orthogonal to the design; scaling weights changes nothing") {
  std::mt19937_64 eng(5);
  for (int rep = 0; rep < 20; ++rep) {
    const Dataset data = random_instance(eng, 12, 3);
    const WeightMatrix w = random_weights(eng, 12);
    const Eigen::VectorXd beta = wls_fit(data, w);
    const Eigen::VectorXd wr = Eigen::Map<const Eigen::VectorXd>(w.weights.data(), 12).cwiseProduct(data.y - data.X * beta);
    CHECK((data.X.transpose() * wr).cwiseAbs().maxCoeff() < 1e-8);
    for (double c : {0.5, 2.0, 10.0}) CHECK((wls_fit(data, scaled(w, c)) - beta).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("singular systems are reported with the location") {
  std::mt19937_64 eng(6);
  Dataset data = random_instance(eng, 8, 2);
  data.X.col(1) = 3.0 * data.X.col(0);
  WeightMatrix w{"Anhui", std::vector<double>(8, 1.0), std::vector<double>(8, 0.0)};
  try {
    wls_fit(data, w);
    FAIL("expected a singular-system error");
  } catch (const SingularSystemError& e) {
    CHECK(e.location() == "Anhui");
  }

  Dataset ok = random_instance(eng, 8, 3);
  WeightMatrix few{"s", {1, 1, 0, 0, 0, 0, 0, 0}, std::vector<double>(8, 0.0)};
  CHECK_THROWS_AS(wls_fit(ok, few), SingularSystemError);
}

TEST_CASE("one location with unity weights collapses to global OLS; trace equals p") {
  std::mt19937_64 eng(8);
  Dataset data = random_instance(eng, 20, 4);
  data.location.assign(20, "L0");
  const auto d = bgwr::testing::path_distances(1);
  const FreqFit fit = fit_all_locations(data, {Kernel::unity, 1.0}, d);
  const Eigen::VectorXd ols = data.X.colPivHouseholderQr().solve(data.y);
  CHECK((fit.beta_hat.row(0).transpose() - ols).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(fit.sse == doctest::Approx((data.y - data.X * ols).squaredNorm()).epsilon(1e-12));
  CHECK(std::abs(fit.effective_params - 4.0) < 1e-10);
  CHECK(std::abs(effective_params_freq(data, {Kernel::unity, 1.0}, d) - 4.0) < 1e-10);
}

TEST_CASE("isolating step kernel gives per-location OLS and trace L*p") {
  const auto d = bgwr::testing::path_distances(4);
  const Dataset data = bgwr::testing::gaussian_dataset(d, 6, Eigen::Vector2d(1.0, -1.0), 1.0, 9);
  const FreqFit fit = fit_all_locations(data, {Kernel::step, 0.5}, d);
  for (std::size_t k = 0; k < 4; ++k) {
    const Eigen::MatrixXd x = data.X.middleRows(6 * k, 6);
    const Eigen::VectorXd y = data.y.segment(6 * k, 6);
    const Eigen::VectorXd ols = x.colPivHouseholderQr().solve(y);
    CHECK((fit.beta_hat.row(k).transpose() - ols).cwiseAbs().maxCoeff() < 1e-12);
  }
  CHECK(std::abs(fit.effective_params - 8.0) < 1e-10);
}

TEST_CASE("large bandwidth on constant-coefficient data recovers the truth everywhere") {
  const auto d = bgwr::testing::china_distances();
  Eigen::VectorXd beta(5);
  beta << 2, 0, 0, 4, 8;
  const Dataset data = bgwr::testing::gaussian_dataset(d, 5, beta, 1.0, 21);
  const FreqFit fit = fit_all_locations(data, {Kernel::graph_exp, 1000.0}, d);
  for (Eigen::Index k = 0; k < fit.beta_hat.rows(); ++k)
    CHECK((fit.beta_hat.row(k).transpose() - beta).cwiseAbs().maxCoeff() < 0.35);
}

TEST_CASE("grid scores equal independent refits") {
  const auto d = bgwr::testing::china_distances();
  Eigen::VectorXd beta(3);
  beta << 1, -1, 2;
  Dataset data = bgwr::testing::gaussian_dataset(d, 5, beta, 1.0, 33);
  for (std::size_t i = 0; i < data.n(); ++i) data.y(i) += 0.5 * d(0, d.index_of(data.location[i])) * data.X(i, 0);
  const std::vector<double> grid{0.7, 1.5, 3.0, 12.0};
  const auto sel = select_bandwidth_grid(data, Kernel::gaussian, d, grid);
  double best = 1e300;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double sse = fit_all_locations(data, {Kernel::gaussian, grid[k]}, d).sse;
    CHECK(sel.score[k] == doctest::Approx(sse).epsilon(1e-12));
    best = std::min(best, sse);
  }
  CHECK(fit_all_locations(data, {Kernel::gaussian, sel.best}, d).sse == best);

  const std::vector<double> one{2.5};
  CHECK(select_bandwidth_grid(data, Kernel::gaussian, d, one).best == 2.5);
}

TEST_CASE("ties go to the smaller bandwidth; singular grid points are skipped") {
  const auto d = bgwr::testing::path_distances(3);
  const Dataset data = bgwr::testing::gaussian_dataset(d, 4, Eigen::Vector2d(1, 1), 1.0, 2);
  const std::vector<double> grid{5.0, 3.0, 4.0};  // unity-like: all equal
  CHECK(select_bandwidth_grid(data, Kernel::unity, d, grid).best == 3.0);

  // Step threshold below 1 leaves each location with 4 rows; 3 covariates fit, 5 do not.
  Eigen::VectorXd b5 = Eigen::VectorXd::Ones(5);
  const Dataset wide = bgwr::testing::gaussian_dataset(d, 4, b5, 1.0, 2);
  const std::vector<double> g2{0.5, 1.0};
  const auto sel = select_bandwidth_grid(wide, Kernel::step, d, g2);
  CHECK(std::isnan(sel.score[0]));
  CHECK(sel.best == 1.0);
  const std::vector<double> g3{0.5};
  CHECK_THROWS_AS(select_bandwidth_grid(wide, Kernel::step, d, g3), Error);
}

TEST_CASE("leave-one-out score favours large bandwidths without spatial variation") {
  const auto d = bgwr::testing::china_distances();
  Eigen::VectorXd beta(5);
  beta << 2, 0, 0, 4, 8;
  const auto grid = default_bandwidth_grid(d);
  int favour_large = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Dataset data = bgwr::testing::gaussian_dataset(d, 5, beta, 1.0, seed);
    const auto sel = select_bandwidth_grid(data, Kernel::graph_exp, d, grid, BandwidthCriterion::loocv);
    if (sel.score.back() <= sel.score.front()) ++favour_large;
  }
  CHECK(favour_large >= 9);
}

TEST_CASE("default grid spans 0.1 to 10 times the largest distance") {
  const auto grid = default_bandwidth_grid(bgwr::testing::china_distances());
  REQUIRE(grid.size() == 40);
  CHECK(grid.front() == doctest::Approx(0.6));
  CHECK(grid.back() == doctest::Approx(60.0));
  for (std::size_t k = 1; k < grid.size(); ++k) CHECK(grid[k] / grid[k - 1] == doctest::Approx(grid[1] / grid[0]));
  CHECK(parse_bandwidth_criterion("loocv") == BandwidthCriterion::loocv);
  CHECK_THROWS_AS(parse_bandwidth_criterion("aic"), InvalidArgument);
}
