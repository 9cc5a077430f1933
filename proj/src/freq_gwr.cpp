#include "bgwr/freq_gwr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bgwr/error.hpp"

namespace bgwr {
namespace {

struct LocalSolve {
  Eigen::VectorXd beta;
  Eigen::MatrixXd r_inv;  // inverse of the triangular QR factor
};

LocalSolve solve_local(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                       std::span<const double> w, const std::string& location) {
  const Eigen::Index p = x.cols();
  std::vector<Eigen::Index> rows;
  rows.reserve(w.size());
  for (std::size_t i = 0; i < w.size(); ++i)
    if (w[i] > 0.0) rows.push_back(static_cast<Eigen::Index>(i));
  if (static_cast<Eigen::Index>(rows.size()) < p)
    throw SingularSystemError(location, "fewer positive-weight rows than covariates");

  Eigen::MatrixXd a(rows.size(), p);
  Eigen::VectorXd rhs(rows.size());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const double sw = std::sqrt(w[rows[k]]);
    a.row(k) = sw * x.row(rows[k]);
    rhs(k) = sw * y(rows[k]);
  }

  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  const Eigen::MatrixXd r = qr.matrixQR().topRows(p).triangularView<Eigen::Upper>();
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(r);
  const auto& sv = svd.singularValues();
  const double smax = sv(0);
  const double smin = sv(p - 1);
  const double rcond = smax > 0.0 ? (smin / smax) * (smin / smax) : 0.0;
  if (!(rcond >= kMinReciprocalCondition))
    throw SingularSystemError(location, "reciprocal condition number " + std::to_string(rcond));

  LocalSolve out;
  const Eigen::VectorXd qtb = qr.householderQ().adjoint() * rhs;
  out.beta = r.triangularView<Eigen::Upper>().solve(qtb.head(p));
  out.r_inv = r.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(p, p));
  return out;
}

// Per-location fits plus, for every observation, the residual and leverage
// under the fit of its own location.
struct Evaluation {
  LocationGroups groups;
  Eigen::MatrixXd beta_hat;
  Eigen::VectorXd residual;
  Eigen::VectorXd leverage;
};

Evaluation evaluate(const Dataset& data, const WeightScheme& scheme, const DistanceMatrix& d) {
  data.validate(d);
  scheme.validate();

  Evaluation ev;
  ev.groups = group_locations(data, d);
  const auto& g = ev.groups;
  const std::size_t n = data.n();
  ev.beta_hat.resize(g.size(), data.p());
  ev.residual.resize(n);
  ev.leverage.resize(n);

  std::vector<double> w(n);
  for (std::size_t k = 0; k < g.size(); ++k) {
    for (std::size_t i = 0; i < n; ++i)
      w[i] = kernel_weight(scheme, d(g.label_index[k], g.label_index[g.obs_group[i]]));
    const LocalSolve fit = solve_local(data.X, data.y, w, g.locations[k]);
    ev.beta_hat.row(k) = fit.beta.transpose();
    for (std::size_t i : g.members[k]) {
      const Eigen::VectorXd xi = data.X.row(i).transpose();
      ev.residual(i) = data.y(i) - xi.dot(fit.beta);
      ev.leverage(i) = w[i] * (fit.r_inv.transpose() * xi).squaredNorm();
    }
  }
  return ev;
}

double criterion_score(const Evaluation& ev, BandwidthCriterion c) {
  if (c == BandwidthCriterion::sse) return ev.residual.squaredNorm();
  double total = 0.0;
  for (Eigen::Index i = 0; i < ev.residual.size(); ++i) {
    const double denom = 1.0 - ev.leverage(i);
    if (denom <= 1e-12) return std::numeric_limits<double>::infinity();
    const double e = ev.residual(i) / denom;
    total += e * e;
  }
  return total;
}

}  // namespace

Eigen::VectorXd wls_fit(const Dataset& data, const WeightMatrix& w) {
  data.validate();
  if (w.size() != data.n()) throw InvalidArgument("weight count differs from n");
  for (double v : w.weights)
    if (!(v >= 0.0) || !std::isfinite(v)) throw InvalidArgument("weights must be finite and >= 0");
  return solve_local(data.X, data.y, w.weights, w.location).beta;
}

FreqFit fit_all_locations(const Dataset& data, const WeightScheme& scheme, const DistanceMatrix& d) {
  const Evaluation ev = evaluate(data, scheme, d);
  FreqFit fit;
  fit.locations = ev.groups.locations;
  fit.beta_hat = ev.beta_hat;
  fit.sse = ev.residual.squaredNorm();
  fit.scheme = scheme;
  fit.effective_params = ev.leverage.sum();
  return fit;
}

double effective_params_freq(const Dataset& data, const WeightScheme& scheme, const DistanceMatrix& d) {
  return evaluate(data, scheme, d).leverage.sum();
}

BandwidthCriterion parse_bandwidth_criterion(std::string_view name) {
  if (name == "sse") return BandwidthCriterion::sse;
  if (name == "loocv" || name == "cv") return BandwidthCriterion::loocv;
  throw InvalidArgument("unknown bandwidth criterion '" + std::string(name) + "'");
}

std::string_view to_string(BandwidthCriterion c) noexcept {
  return c == BandwidthCriterion::sse ? "sse" : "loocv";
}

BandwidthSelection select_bandwidth_grid(const Dataset& data, Kernel kernel, const DistanceMatrix& d,
                                         std::span<const double> grid, BandwidthCriterion criterion) {
  if (grid.empty()) throw InvalidArgument("empty bandwidth grid");
  for (double b : grid)
    if (!(b > 0.0) || !std::isfinite(b)) throw InvalidArgument("bandwidth grid values must be > 0");

  BandwidthSelection sel;
  sel.grid.assign(grid.begin(), grid.end());
  sel.score.assign(grid.size(), std::numeric_limits<double>::quiet_NaN());

  bool found = false;
  double best_score = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    try {
      sel.score[k] = criterion_score(evaluate(data, {kernel, grid[k]}, d), criterion);
    } catch (const SingularSystemError&) {
      continue;
    }
    const double s = sel.score[k];
    if (!std::isfinite(s)) continue;
    if (!found || s < best_score || (s == best_score && grid[k] < sel.best)) {
      found = true;
      best_score = s;
      sel.best = grid[k];
    }
  }
  if (!found) throw Error("every bandwidth in the grid produced a singular fit");
  return sel;
}

std::vector<double> default_bandwidth_grid(const DistanceMatrix& d, int points) {
  const double dmax = d.max_finite();
  if (!(dmax > 0.0)) throw InvalidArgument("distance matrix has no positive finite distance");
  if (points < 2) throw InvalidArgument("grid needs at least 2 points");
  std::vector<double> grid(points);
  const double lo = std::log(0.1 * dmax);
  const double hi = std::log(10.0 * dmax);
  for (int k = 0; k < points; ++k) grid[k] = std::exp(lo + (hi - lo) * k / (points - 1));
  return grid;
}

}  // namespace bgwr
