#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bgwr/bayes_gwr.hpp"
#include "bgwr/freq_gwr.hpp"
#include "bgwr/weighting.hpp"

namespace bgwr {

using KeyValues = std::map<std::string, std::string>;

// Everything a CLI invocation needs. Values resolve as
//   built-in default < config file < command-line flag.
struct RunConfig {
  std::string command;  // fit | simulate | assess | distance

  std::string data;
  std::string adjacency;
  std::string patches;
  std::string coords;
  std::string regions;
  std::string chain_file;
  std::string out = "out";

  std::string kernel = "graph_exp";
  std::optional<double> bandwidth;
  double prior_D = 100.0;
  int chain = 4000;
  int burnin = 1000;
  std::uint64_t seed = 1;
  unsigned threads = 0;  // 0: all available cores

  bool standardize = false;
  bool log_response = false;
  bool intercept = false;

  std::string method = "bayes";
  std::string freq_criterion = "sse";
  bool dump_chain = false;

  // Priors
  double tau2 = 0.001;
  double c2 = 10000.0;
  double inclusion_prior = 0.5;
  double alpha1 = 0.01;
  double alpha2 = 0.01;
  bool tau_hyperprior = false;
  bool selection = true;

  // simulate
  std::string design = "constant";
  int setting = 1;
  int replicates = 20;
  int obs_per_location = 5;
  double noise_sd = 1.0;
  bool compare_freq = true;

  BayesConfig bayes_config() const;
  Kernel kernel_id() const { return parse_kernel(kernel); }
  BandwidthCriterion criterion() const { return parse_bandwidth_criterion(freq_criterion); }
  unsigned thread_count() const;

  /// Checks enumerations and that input paths exist, before any computation.
  void validate() const;
};

/// Option keys as used on the command line (without "--") and in config files.
const std::vector<std::string>& config_keys();
bool is_flag_key(std::string_view key);

/// Sets one field from its textual value; throws InvalidArgument on unknown keys or bad values.
void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value);
/// Textual value of one field, as echoed into manifests.
std::string get_setting(const RunConfig& cfg, std::string_view key);

/// Flat `key = value` lines; `#` starts a comment; underscores in keys read as dashes.
KeyValues parse_config_text(std::istream& in);

RunConfig resolve_config(std::string command, const KeyValues& file_values, const KeyValues& cli_values);

/// Manifest body: one `key = value` line per option.
std::string describe(const RunConfig& cfg);

}  // namespace bgwr
