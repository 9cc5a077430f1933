#include "bgwr/config.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <functional>
#include <istream>
#include <sstream>
#include <thread>

#include "bgwr/error.hpp"
#include "bgwr/io.hpp"
#include "bgwr/simulation.hpp"

namespace bgwr {
namespace {

bool parse_bool(std::string_view v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw InvalidArgument("expected a boolean, got '" + std::string(v) + "'");
}

template <typename Int>
Int parse_int(std::string_view v) {
  Int out{};
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc() || ptr != v.data() + v.size())
    throw InvalidArgument("expected an integer, got '" + std::string(v) + "'");
  return out;
}

double parse_real(std::string_view v) {
  try {
    return io::parse_double(v);
  } catch (const ParseError&) {
    throw InvalidArgument("expected a number, got '" + std::string(v) + "'");
  }
}

std::string show(bool b) { return b ? "true" : "false"; }

struct Field {
  std::string key;
  bool flag;
  std::function<void(RunConfig&, std::string_view)> set;
  std::function<std::string(const RunConfig&)> get;
};

#define BGWR_STRING(k, member)                                                    \
  Field{k, false, [](RunConfig& c, std::string_view v) { c.member = std::string(v); }, \
        [](const RunConfig& c) { return c.member; }}
#define BGWR_REAL(k, member)                                                      \
  Field{k, false, [](RunConfig& c, std::string_view v) { c.member = parse_real(v); }, \
        [](const RunConfig& c) { return io::format_double(c.member); }}
#define BGWR_INT(k, member, type)                                                       \
  Field{k, false, [](RunConfig& c, std::string_view v) { c.member = parse_int<type>(v); }, \
        [](const RunConfig& c) { return std::to_string(c.member); }}
#define BGWR_BOOL(k, member)                                                      \
  Field{k, true, [](RunConfig& c, std::string_view v) { c.member = parse_bool(v); }, \
        [](const RunConfig& c) { return show(c.member); }}

const std::vector<Field>& fields() {
  static const std::vector<Field> table{
      BGWR_STRING("data", data),
      BGWR_STRING("adjacency", adjacency),
      BGWR_STRING("patches", patches),
      BGWR_STRING("coords", coords),
      BGWR_STRING("regions", regions),
      BGWR_STRING("chain-file", chain_file),
      BGWR_STRING("out", out),
      BGWR_STRING("kernel", kernel),
      Field{"bandwidth", false,
            [](RunConfig& c, std::string_view v) {
              if (v.empty() || v == "none") c.bandwidth.reset();
              else c.bandwidth = parse_real(v);
            },
            [](const RunConfig& c) { return c.bandwidth ? io::format_double(*c.bandwidth) : std::string("none"); }},
      BGWR_REAL("prior-D", prior_D),
      BGWR_INT("chain", chain, int),
      BGWR_INT("burnin", burnin, int),
      BGWR_INT("seed", seed, std::uint64_t),
      BGWR_INT("threads", threads, unsigned),
      BGWR_BOOL("standardize", standardize),
      BGWR_BOOL("log-response", log_response),
      BGWR_BOOL("intercept", intercept),
      BGWR_STRING("method", method),
      BGWR_STRING("freq-criterion", freq_criterion),
      BGWR_BOOL("dump-chain", dump_chain),
      BGWR_REAL("tau2", tau2),
      BGWR_REAL("c2", c2),
      BGWR_REAL("inclusion-prior", inclusion_prior),
      BGWR_REAL("alpha1", alpha1),
      BGWR_REAL("alpha2", alpha2),
      BGWR_BOOL("tau-hyperprior", tau_hyperprior),
      BGWR_BOOL("selection", selection),
      BGWR_STRING("design", design),
      BGWR_INT("setting", setting, int),
      BGWR_INT("replicates", replicates, int),
      BGWR_INT("obs-per-location", obs_per_location, int),
      BGWR_REAL("noise-sd", noise_sd),
      BGWR_BOOL("compare-freq", compare_freq),
  };
  return table;
}

#undef BGWR_STRING
#undef BGWR_REAL
#undef BGWR_INT
#undef BGWR_BOOL

const Field& field(std::string_view key) {
  std::string k(key);
  std::replace(k.begin(), k.end(), '_', '-');
  for (const auto& f : fields())
    if (f.key == k) return f;
  throw InvalidArgument("unknown option '" + std::string(key) + "'");
}

void require_file(const std::string& path, std::string_view what) {
  if (path.empty()) throw InvalidArgument(std::string(what) + " path required");
  if (!std::filesystem::is_regular_file(path))
    throw InvalidArgument(std::string(what) + " file '" + path + "' does not exist");
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& f : fields()) k.push_back(f.key);
    return k;
  }();
  return keys;
}

bool is_flag_key(std::string_view key) { return field(key).flag; }

void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value) {
  const Field& f = field(key);
  try {
    f.set(cfg, value);
  } catch (const InvalidArgument& e) {
    throw InvalidArgument("option '" + f.key + "': " + e.what());
  }
}

std::string get_setting(const RunConfig& cfg, std::string_view key) { return field(key).get(cfg); }

KeyValues parse_config_text(std::istream& in) {
  KeyValues kv;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("expected 'key = value'", lineno);
    auto strip = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      if (a == std::string::npos) return std::string();
      const auto b = s.find_last_not_of(" \t\r");
      return s.substr(a, b - a + 1);
    };
    std::string key = strip(line.substr(0, eq));
    std::replace(key.begin(), key.end(), '_', '-');
    field(key);  // reject unknown keys early
    kv[key] = strip(line.substr(eq + 1));
  }
  return kv;
}

RunConfig resolve_config(std::string command, const KeyValues& file_values, const KeyValues& cli_values) {
  RunConfig cfg;
  cfg.command = std::move(command);
  for (const auto& [k, v] : file_values) apply_setting(cfg, k, v);
  for (const auto& [k, v] : cli_values) apply_setting(cfg, k, v);
  return cfg;
}

std::string describe(const RunConfig& cfg) {
  std::ostringstream out;
  out << "command = " << cfg.command << '\n';
  for (const auto& f : fields()) out << f.key << " = " << f.get(cfg) << '\n';
  return out.str();
}

BayesConfig RunConfig::bayes_config() const {
  BayesConfig b;
  b.tau2 = tau2;
  b.c2 = c2;
  b.inclusion_prior = inclusion_prior;
  b.alpha1 = alpha1;
  b.alpha2 = alpha2;
  b.prior_upper = prior_D;
  b.chain_length = chain;
  b.burn_in = burnin;
  b.seed = seed;
  b.tau_hyperprior = tau_hyperprior;
  b.variable_selection = selection;
  if (bandwidth) b.fixed_bandwidth = *bandwidth;
  return b;
}

unsigned RunConfig::thread_count() const {
  if (threads > 0) return threads;
  return std::max(1u, std::thread::hardware_concurrency());
}

void RunConfig::validate() const {
  static const std::vector<std::string> commands{"fit", "simulate", "assess", "distance"};
  if (std::find(commands.begin(), commands.end(), command) == commands.end())
    throw InvalidArgument("unknown command '" + command + "'");
  kernel_id();
  criterion();
  if (method != "bayes" && method != "freq") throw InvalidArgument("method must be 'bayes' or 'freq'");

  auto need_locations = [&] {
    if (!coords.empty()) {
      require_file(coords, "coordinates");
      return;
    }
    require_file(adjacency, "adjacency");
    if (!patches.empty()) require_file(patches, "patches");
  };

  if (command == "distance") {
    need_locations();
  } else if (command == "fit") {
    need_locations();
    require_file(data, "dataset");
    if (method == "bayes") bayes_config().validate();
  } else if (command == "assess") {
    need_locations();
    require_file(data, "dataset");
    require_file(chain_file, "chain");
  } else if (command == "simulate") {
    require_file(adjacency, "adjacency");
    if (!patches.empty()) require_file(patches, "patches");
    const Pattern p = parse_pattern(design);
    if (p == Pattern::regional) require_file(regions, "regions");
    if (setting < 1 || setting > 3) throw InvalidArgument("setting must be 1, 2 or 3");
    if (replicates <= 0 || obs_per_location <= 0) throw InvalidArgument("replicates and obs-per-location must be > 0");
    bayes_config().validate();
  }
}

}  // namespace bgwr
