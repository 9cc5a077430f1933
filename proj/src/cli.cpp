#include "bgwr/cli.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "bgwr/assessment.hpp"
#include "bgwr/bayes_gwr.hpp"
#include "bgwr/error.hpp"
#include "bgwr/freq_gwr.hpp"
#include "bgwr/io.hpp"
#include "bgwr/simulation.hpp"

namespace bgwr::cli {
namespace {

namespace fs = std::filesystem;
using io::format_double;

// Files produced by one command. Unless commit() is called, everything
// opened through this object is deleted on destruction.
class Outputs {
public:
  explicit Outputs(fs::path dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }
  Outputs(const Outputs&) = delete;
  Outputs& operator=(const Outputs&) = delete;
  ~Outputs() {
    if (committed_) return;
    std::error_code ec;
    for (const auto& p : written_) fs::remove(p, ec);
  }

  std::ofstream open(const std::string& name) {
    const fs::path p = dir_ / name;
    written_.push_back(p);
    std::ofstream out(p);
    if (!out) throw Error("cannot write '" + p.string() + "'");
    return out;
  }

  void commit() { committed_ = true; }

private:
  fs::path dir_;
  std::vector<fs::path> written_;
  bool committed_ = false;
};

io::DatasetOptions dataset_options(const RunConfig& cfg) {
  return {.log_response = cfg.log_response, .standardize = cfg.standardize, .intercept = cfg.intercept};
}

std::vector<std::string> coefficient_names(const Dataset& data) {
  if (!data.covariate_names.empty()) return data.covariate_names;
  std::vector<std::string> names;
  for (std::size_t j = 0; j < data.p(); ++j) names.push_back("beta_" + std::to_string(j + 1));
  return names;
}

void run_distance(const RunConfig& cfg, Outputs& out, std::ostream& log) {
  const DistanceMatrix d = load_distances(cfg);
  {
    auto f = out.open("distance.csv");
    io::write_distance_csv(f, d);
  }
  if (d.size() >= 3 && d.all_reachable()) {
    const MdsEmbedding e = mds_embed(d);
    auto f = out.open("mds.csv");
    f << "location,x,y\n";
    for (std::size_t i = 0; i < e.labels.size(); ++i)
      f << e.labels[i] << ',' << format_double(e.coords(i, 0)) << ',' << format_double(e.coords(i, 1)) << '\n';
  }
  log << "locations: " << d.size() << ", max finite distance: " << format_double(d.max_finite()) << '\n';
}

void run_fit_freq(const RunConfig& cfg, const Dataset& data, const DistanceMatrix& d, Outputs& out,
                  std::ostream& log) {
  const Kernel kernel = cfg.kernel_id();
  const std::vector<double> grid = cfg.bandwidth ? std::vector<double>{*cfg.bandwidth} : default_bandwidth_grid(d);
  const BandwidthSelection sel = select_bandwidth_grid(data, kernel, d, grid, cfg.criterion());
  const FreqFit fit = fit_all_locations(data, {kernel, sel.best}, d);
  const auto names = coefficient_names(data);

  {
    auto f = out.open("coefficients.csv");
    f << "location";
    for (const auto& n : names) f << ',' << n;
    f << '\n';
    for (std::size_t l = 0; l < fit.locations.size(); ++l) {
      f << fit.locations[l];
      for (Eigen::Index j = 0; j < fit.beta_hat.cols(); ++j) f << ',' << format_double(fit.beta_hat(l, j));
      f << '\n';
    }
  }
  {
    auto f = out.open("sse_table.csv");
    f << "bandwidth," << to_string(cfg.criterion()) << '\n';
    for (std::size_t k = 0; k < sel.grid.size(); ++k)
      f << format_double(sel.grid[k]) << ',' << format_double(sel.score[k]) << '\n';
  }
  {
    auto f = out.open("summary.txt");
    f << describe(cfg);
    f << "selected_bandwidth = " << format_double(sel.best) << '\n';
    f << "sse = " << format_double(fit.sse) << '\n';
    f << "effective_params = " << format_double(fit.effective_params) << '\n';
  }
  log << "bandwidth " << format_double(sel.best) << ", SSE " << format_double(fit.sse) << ", p_D "
      << format_double(fit.effective_params) << '\n';
}

void run_fit_bayes(const RunConfig& cfg, const Dataset& data, const DistanceMatrix& d, Outputs& out,
                   std::ostream& log) {
  const GwrPosterior post = run_sampler(data, d, cfg.kernel_id(), cfg.bayes_config());
  const PosteriorSummary sum = posterior_summary(post);
  const auto names = coefficient_names(data);

  {
    auto f = out.open("posterior_summary.csv");
    f << "location";
    for (const auto& n : names) f << ',' << n << "_mean," << n << "_hpd_lower," << n << "_hpd_upper";
    f << ",sigma2_mean\n";
    for (std::size_t l = 0; l < sum.locations.size(); ++l) {
      f << sum.locations[l];
      for (std::size_t j = 0; j < post.p; ++j)
        f << ',' << format_double(sum.beta_mean(l, j)) << ',' << format_double(sum.beta_hpd[l][j].lower) << ','
          << format_double(sum.beta_hpd[l][j].upper);
      f << ',' << format_double(sum.sigma2_mean(l)) << '\n';
    }
  }
  {
    auto f = out.open("gamma.csv");
    f << "covariate,inclusion_frequency,selected\n";
    for (std::size_t j = 0; j < post.p; ++j)
      f << names[j] << ',' << format_double(sum.inclusion_frequency[j]) << ',' << sum.gamma_mode[j] << '\n';
  }
  {
    auto f = out.open("b_trace.csv");
    f << "draw,b\n";
    for (std::size_t t = 0; t < post.draws; ++t) f << t << ',' << format_double(post.b[t]) << '\n';
  }
  if (cfg.dump_chain) {
    auto f = out.open("chain.csv");
    io::write_chain_csv(f, post);
  }
  {
    auto f = out.open("manifest.txt");
    f << describe(cfg);
    f << "draws = " << post.draws << '\n';
    f << "b_mean = " << format_double(sum.b_mean) << '\n';
    f << "acceptance_rate_b = " << format_double(post.acceptance_rate_b) << '\n';
    f << "selected =";
    for (std::size_t j : selected_model(sum.inclusion_frequency)) f << ' ' << names[j];
    f << '\n';
  }
  log << "posterior mean bandwidth " << format_double(sum.b_mean) << ", acceptance "
      << format_double(post.acceptance_rate_b) << '\n';
}

void run_assess(const RunConfig& cfg, const Dataset& data, const DistanceMatrix& d, Outputs& out,
                std::ostream& log) {
  std::ifstream in(cfg.chain_file);
  if (!in) throw Error("cannot open '" + cfg.chain_file + "'");
  const GwrPosterior post = io::parse_chain_csv(in);
  const ModelAssessment a = assess(post, data, d);
  const LocationGroups groups = group_locations(data, d);
  {
    auto f = out.open("assessment.csv");
    f << "dic,p_d,lpml,mean_deviance,deviance_at_mean,dic_alt\n";
    f << format_double(a.dic) << ',' << format_double(a.p_d) << ',' << format_double(a.lpml) << ','
      << format_double(a.mean_deviance) << ',' << format_double(a.deviance_at_mean) << ','
      << format_double(a.dic_alt) << '\n';
  }
  {
    auto f = out.open("cpo.csv");
    f << "observation,location,cpo,log_cpo\n";
    for (std::size_t i = 0; i < data.n(); ++i)
      f << i + 1 << ',' << data.location[i] << ',' << format_double(a.cpo[i]) << ','
        << format_double(a.log_cpo[i]) << '\n';
  }
  log << "DIC " << format_double(a.dic) << ", p_D " << format_double(a.p_d) << ", LPML " << format_double(a.lpml)
      << '\n';
}

// `true` is the location average of the true coefficient.
void write_method_rows(std::ostream& f, std::string_view method, const MethodReport& m,
                       const Eigen::MatrixXd& truth) {
  for (std::size_t j = 0; j < m.coefficients.size(); ++j) {
    const auto& c = m.coefficients[j];
    f << method << ",beta_" << j + 1 << ',' << format_double(c.mean_estimate) << ',' << format_double(c.mab) << ','
      << format_double(c.msd) << ',' << format_double(c.mmse) << ',' << format_double(c.mcr) << ','
      << format_double(truth.col(static_cast<Eigen::Index>(j)).mean()) << ',' << format_double(c.acc) << ',';
    if (j == 0)
      f << format_double(m.model_acc) << ',' << format_double(m.mean_bandwidth) << ','
        << format_double(m.mean_effective_params);
    else
      f << ",,";
    f << '\n';
  }
}

void run_simulate(const RunConfig& cfg, Outputs& out, std::ostream& log) {
  const auto started = std::chrono::steady_clock::now();
  const DistanceMatrix d = load_distances(cfg);

  SimulationDesign design = SimulationDesign::for_setting(parse_pattern(cfg.design), cfg.setting);
  if (design.pattern == Pattern::regional) design.regions = io::read_regions(cfg.regions);
  design.obs_per_location = cfg.obs_per_location;
  design.replicates = cfg.replicates;
  design.noise_sd = cfg.noise_sd;
  design.seed = cfg.seed;

  StudyConfig sc;
  sc.kernel = cfg.kernel_id();
  sc.bayes = cfg.bayes_config();
  sc.run_bayes = true;
  sc.run_freq = cfg.compare_freq;
  sc.freq_criterion = cfg.criterion();
  sc.threads = cfg.thread_count();
  const SimulationReport rep = run_study(design, d, sc);

  {
    auto f = out.open("report.csv");
    f << "method,coefficient,mean_estimate,MAB,MSD,MMSE,MCR,true,ACC,model_ACC,b,p_D\n";
    if (rep.bayes) write_method_rows(f, "bayes", *rep.bayes, rep.truth);
    if (rep.freq) write_method_rows(f, "freq", *rep.freq, rep.truth);
  }
  {
    auto f = out.open("replicates.csv");
    f << "method,index,bandwidth,effective_params,dic,lpml,selected\n";
    for (std::size_t r = 0; r < rep.bayes_replicates.size(); ++r) {
      const auto& e = rep.bayes_replicates[r];
      f << "bayes," << r << ',' << format_double(e.bandwidth) << ',' << format_double(e.effective_params) << ','
        << format_double(rep.bayes_dic[r]) << ',' << format_double(rep.bayes_lpml[r]) << ',';
      for (int s : e.selected) f << s;
      f << '\n';
    }
    for (std::size_t r = 0; r < rep.freq_replicates.size(); ++r) {
      const auto& e = rep.freq_replicates[r];
      f << "freq," << r << ',' << format_double(e.bandwidth) << ',' << format_double(e.effective_params)
        << ",,,\n";
    }
  }
  if (!rep.errors.empty()) {
    auto f = out.open("errors.csv");
    f << "replicate,method,message\n";
    for (const auto& e : rep.errors) f << e.replicate << ',' << e.method << ",\"" << e.message << "\"\n";
  }
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  {
    auto f = out.open("manifest.txt");
    f << describe(cfg);
    f << "replicate_data_seeds = stream(seed, data, r)\n";
    f << "replicate_chain_seeds = stream(seed, chain, r)\n";
    f << "failed_fits = " << rep.errors.size() << '\n';
    f << "wall_time_seconds = " << format_double(wall) << '\n';
  }
  log << "simulation finished: " << rep.bayes_replicates.size() << " Bayesian fits, " << rep.errors.size()
      << " failures, " << format_double(wall) << " s\n";
}

}  // namespace

DistanceMatrix load_distances(const RunConfig& cfg) {
  if (!cfg.coords.empty()) {
    const io::Coordinates c = io::read_coordinates(cfg.coords);
    return euclidean_distances(c.labels, c.lat_lon);
  }
  return graph_distances(io::load_graph(cfg.adjacency, cfg.patches));
}

RunConfig parse_command_line(int argc, const char* const* argv) {
  CLI::App app{"Bayesian geographically weighted regression", "bgwr"};
  std::string command;
  std::string config_path;
  app.add_option("command", command, "fit | simulate | assess | distance")
      ->required()
      ->check(CLI::IsMember({"fit", "simulate", "assess", "distance"}));
  app.add_option("--config", config_path, "flat key = value file")->check(CLI::ExistingFile);

  std::map<std::string, std::string> raw;
  std::map<std::string, CLI::Option*> opts;
  for (const auto& key : config_keys()) {
    if (is_flag_key(key)) {
      opts[key] = app.add_flag("--" + key, raw[key]);
    } else {
      opts[key] = app.add_option("--" + key, raw[key]);
    }
  }
  app.parse(argc, argv);

  KeyValues file_values;
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    file_values = parse_config_text(in);
  }
  KeyValues cli_values;
  for (const auto& [key, opt] : opts) {
    if (opt->count() == 0) continue;
    cli_values[key] = raw[key];
  }
  return resolve_config(command, file_values, cli_values);
}

int run(const RunConfig& cfg, std::ostream& log) {
  try {
    cfg.validate();
    Outputs out(cfg.out);
    if (cfg.command == "distance") {
      run_distance(cfg, out, log);
    } else if (cfg.command == "simulate") {
      run_simulate(cfg, out, log);
    } else {
      const DistanceMatrix d = load_distances(cfg);
      const Dataset data = io::read_dataset(cfg.data, dataset_options(cfg));
      data.validate(d);
      if (cfg.command == "assess") run_assess(cfg, data, d, out, log);
      else if (cfg.method == "freq") run_fit_freq(cfg, data, d, out, log);
      else run_fit_bayes(cfg, data, d, out, log);
    }
    out.commit();
    return 0;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << '\n';
    return 1;
  }
}

int main(int argc, const char* const* argv) {
  RunConfig cfg;
  try {
    cfg = parse_command_line(argc, argv);
  } catch (const CLI::ParseError& e) {
    CLI::App dummy;
    return dummy.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return run(cfg, std::cerr);
}

}  // namespace bgwr::cli
