#include "bgwr/weighting.hpp"

#include <array>
#include <cmath>
#include <limits>

#include "bgwr/error.hpp"

namespace bgwr {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

constexpr std::array<std::pair<Kernel, std::string_view>, 6> kKernelNames{{
    {Kernel::unity, "unity"},
    {Kernel::step, "step"},
    {Kernel::exponential, "exponential"},
    {Kernel::gaussian, "gaussian"},
    {Kernel::bisquare, "bisquare"},
    {Kernel::graph_exp, "graph_exp"},
}};

void check_distance(double d) {
  if (std::isnan(d) || d < 0.0) throw InvalidArgument("negative or NaN distance");
}

}  // namespace

Kernel parse_kernel(std::string_view name) {
  for (const auto& [k, n] : kKernelNames)
    if (n == name) return k;
  throw InvalidArgument("unknown kernel '" + std::string(name) + "'");
}

std::string_view to_string(Kernel k) noexcept {
  for (const auto& [kk, n] : kKernelNames)
    if (kk == k) return n;
  return "?";
}

void WeightScheme::validate() const {
  if (kernel == Kernel::unity) return;
  if (!std::isfinite(bandwidth)) throw InvalidArgument("bandwidth must be finite");
  if (kernel == Kernel::step) {
    if (bandwidth < 0.0) throw InvalidArgument("step threshold must be >= 0");
    return;
  }
  if (bandwidth <= 0.0) throw InvalidArgument("bandwidth must be > 0");
}

double kernel_log_weight(const WeightScheme& s, double d) {
  check_distance(d);
  if (!is_reachable(d)) return kNegInf;
  const double b = s.bandwidth;
  switch (s.kernel) {
    case Kernel::unity:
      return 0.0;
    case Kernel::step:
      return d <= b ? 0.0 : kNegInf;
    case Kernel::exponential:
      return -d / b;
    case Kernel::gaussian:
      return -(d / b) * (d / b);
    case Kernel::bisquare: {
      if (d >= b) return kNegInf;
      const double u = d / b;
      return 2.0 * std::log1p(-u * u);
    }
    case Kernel::graph_exp:
      return d <= 1.0 ? 0.0 : -d / b;
  }
  return kNegInf;
}

double kernel_weight(const WeightScheme& s, double d) {
  return std::exp(kernel_log_weight(s, d));
}

bool WeightMatrix::positive(std::size_t i) const {
  if (log_weights.empty()) return weights[i] > 0.0;
  return log_weights[i] != kNegInf;
}

double WeightMatrix::log_weight(std::size_t i) const {
  if (log_weights.empty()) return weights[i] > 0.0 ? std::log(weights[i]) : kNegInf;
  return log_weights[i];
}

WeightMatrix weight_matrix(const WeightScheme& scheme, const DistanceMatrix& d,
                           std::string_view target,
                           std::span<const std::string> obs_locations) {
  scheme.validate();
  const std::size_t t = d.index_of(target);

  WeightMatrix w;
  w.location = std::string(target);
  w.weights.reserve(obs_locations.size());
  w.log_weights.reserve(obs_locations.size());
  for (const auto& loc : obs_locations) {
    const double lw = kernel_log_weight(scheme, d(t, d.index_of(loc)));
    w.log_weights.push_back(lw);
    w.weights.push_back(std::exp(lw));
  }
  return w;
}

}  // namespace bgwr
