#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bgwr/bayes_gwr.hpp"
#include "bgwr/dataset.hpp"
#include "bgwr/freq_gwr.hpp"
#include "bgwr/spatial_graph.hpp"
#include "bgwr/weighting.hpp"

namespace bgwr {

enum class Pattern { constant, mds_linear, regional };

Pattern parse_pattern(std::string_view name);
std::string_view to_string(Pattern p) noexcept;

/// Coefficients of setting 1, 2 or 3 without spatial variation.
Eigen::VectorXd setting_beta(int setting);
/// Per-region coefficients (rows = regions 0..3) for the regional design.
Eigen::MatrixXd regional_beta_table(int setting);

struct SimulationDesign {
  Pattern pattern = Pattern::constant;
  Eigen::VectorXd base_beta;
  std::map<std::string, int> regions;  // location -> region row
  Eigen::MatrixXd region_beta;         // one row per region
  int obs_per_location = 5;
  int replicates = 20;
  double noise_sd = 1.0;
  std::uint64_t seed = 1;

  /// Design for one of the three settings; regional designs still need `regions`.
  static SimulationDesign for_setting(Pattern pattern, int setting);
  void validate() const;
};

/// True coefficients at each location (rows follow `locations`). The MDS
/// embedding is required for Pattern::mds_linear only.
Eigen::MatrixXd true_beta(const SimulationDesign& design, const std::vector<std::string>& locations,
                          const MdsEmbedding* embedding = nullptr);

/// X ~ N(0, 1) i.i.d., y = x_i^T beta(l(i)) + noise_sd * N(0, 1); rows grouped by location.
Dataset generate_dataset(const SimulationDesign& design, const std::vector<std::string>& locations,
                         const Eigen::MatrixXd& truth, std::uint64_t replicate_seed);

// Estimates of one replicate. Rows of the matrices follow the location order
// of the truth matrix.
struct ReplicateEstimates {
  Eigen::MatrixXd estimate;
  Eigen::MatrixXd hpd_lower;  // empty when no intervals are available
  Eigen::MatrixXd hpd_upper;
  std::vector<int> selected;  // per covariate; empty for methods without selection
  double bandwidth = 0.0;
  double effective_params = 0.0;
};

struct CoefficientMetrics {
  double mean_estimate = 0.0;
  double mab = 0.0;
  double msd = 0.0;
  double mmse = 0.0;
  double mcr = std::numeric_limits<double>::quiet_NaN();
  bool in_model = false;
  double acc = std::numeric_limits<double>::quiet_NaN();
};

struct MethodReport {
  std::vector<CoefficientMetrics> coefficients;
  double model_acc = std::numeric_limits<double>::quiet_NaN();
  double mean_bandwidth = 0.0;
  double mean_effective_params = 0.0;
  std::size_t replicates = 0;
};

/// Per-location statistics over replicates, averaged over locations. MSD uses
/// the r - 1 denominator and is 0 for a single replicate.
MethodReport metrics(const std::vector<ReplicateEstimates>& replicates, const Eigen::MatrixXd& truth);

struct StudyConfig {
  Kernel kernel = Kernel::graph_exp;
  BayesConfig bayes;
  bool run_bayes = true;
  bool run_freq = true;
  BandwidthCriterion freq_criterion = BandwidthCriterion::sse;
  unsigned threads = 1;
};

struct ReplicateError {
  int replicate;
  std::string method;
  std::string message;
};

struct SimulationReport {
  Pattern pattern = Pattern::constant;
  std::vector<std::string> locations;
  Eigen::MatrixXd truth;
  std::optional<MethodReport> bayes;
  std::optional<MethodReport> freq;
  std::vector<ReplicateEstimates> bayes_replicates;
  std::vector<ReplicateEstimates> freq_replicates;
  std::vector<double> bayes_dic;
  std::vector<double> bayes_dic_alt;
  std::vector<double> bayes_lpml;
  std::vector<ReplicateError> errors;
};

/// generate -> fit -> summarize for every replicate, then metrics. Replicate r
/// draws data from seed stream (design.seed, data, r) and its chain from
/// (design.seed, chain, r). Failed fits are listed in `errors`.
SimulationReport run_study(const SimulationDesign& design, const DistanceMatrix& d, const StudyConfig& cfg);

}  // namespace bgwr
