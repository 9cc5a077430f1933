#include "bgwr/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <random>
#include <thread>

#include "bgwr/assessment.hpp"
#include "bgwr/error.hpp"
#include "bgwr/rng.hpp"

namespace bgwr {

Pattern parse_pattern(std::string_view name) {
  if (name == "constant") return Pattern::constant;
  if (name == "mds" || name == "mds_linear") return Pattern::mds_linear;
  if (name == "regional") return Pattern::regional;
  throw InvalidArgument("unknown design '" + std::string(name) + "'");
}

std::string_view to_string(Pattern p) noexcept {
  switch (p) {
    case Pattern::constant: return "constant";
    case Pattern::mds_linear: return "mds_linear";
    case Pattern::regional: return "regional";
  }
  return "?";
}

Eigen::VectorXd setting_beta(int setting) {
  Eigen::VectorXd b(5);
  switch (setting) {
    case 1: b << 2, 0, 0, 4, 8; break;
    case 2: b << 2, 2, 0, 4, 8; break;
    case 3: b << 2, 2, 3, 4, 8; break;
    default: throw InvalidArgument("setting must be 1, 2 or 3");
  }
  return b;
}

Eigen::MatrixXd regional_beta_table(int setting) {
  Eigen::MatrixXd t(4, 5);
  switch (setting) {
    case 1:
      t << 1.8, 0, 0, 4.2, 7,
           1.5, 0, 0, 3.8, 9,
           2.2, 0, 0, 4.0, 8.5,
           2.0, 0, 0, 4.0, 8;
      break;
    case 2:
      t << 1.8, 1.8, 0, 4.2, 7,
           1.5, 1.5, 0, 3.8, 9,
           2.2, 2.2, 0, 4.0, 8.5,
           2.0, 2.0, 0, 4.0, 8;
      break;
    case 3:
      t << 1.8, 1.8, 2.9, 4.2, 7,
           1.5, 1.5, 3.4, 3.8, 9,
           2.2, 2.2, 3.1, 4.0, 8.5,
           2.0, 2.0, 3.0, 4.0, 8;
      break;
    default: throw InvalidArgument("setting must be 1, 2 or 3");
  }
  return t;
}

SimulationDesign SimulationDesign::for_setting(Pattern pattern, int setting) {
  SimulationDesign d;
  d.pattern = pattern;
  d.base_beta = setting_beta(setting);
  if (pattern == Pattern::regional) d.region_beta = regional_beta_table(setting);
  return d;
}

void SimulationDesign::validate() const {
  if (obs_per_location <= 0) throw InvalidArgument("obs_per_location must be > 0");
  if (replicates <= 0) throw InvalidArgument("replicates must be > 0");
  if (!(noise_sd >= 0.0)) throw InvalidArgument("noise_sd must be >= 0");
  if (pattern == Pattern::regional) {
    if (region_beta.rows() == 0) throw InvalidArgument("regional design without a region table");
    for (const auto& [loc, r] : regions)
      if (r < 0 || r >= region_beta.rows())
        throw InvalidArgument("region " + std::to_string(r) + " of '" + loc + "' has no coefficient row");
  } else if (base_beta.size() == 0) {
    throw InvalidArgument("design without base coefficients");
  }
}

Eigen::MatrixXd true_beta(const SimulationDesign& design, const std::vector<std::string>& locations,
                          const MdsEmbedding* embedding) {
  design.validate();
  const auto nl = static_cast<Eigen::Index>(locations.size());
  switch (design.pattern) {
    case Pattern::constant: {
      Eigen::MatrixXd t(nl, design.base_beta.size());
      for (Eigen::Index l = 0; l < nl; ++l) t.row(l) = design.base_beta.transpose();
      return t;
    }
    case Pattern::mds_linear: {
      if (embedding == nullptr) throw InvalidArgument("mds_linear design needs an MDS embedding");
      Eigen::MatrixXd t(nl, design.base_beta.size());
      for (Eigen::Index l = 0; l < nl; ++l) {
        const auto k = std::find(embedding->labels.begin(), embedding->labels.end(), locations[l]);
        if (k == embedding->labels.end())
          throw InvalidArgument("location '" + locations[l] + "' missing from the embedding");
        const auto row = k - embedding->labels.begin();
        const double shift = 0.2 * (embedding->coords(row, 0) + embedding->coords(row, 1));
        for (Eigen::Index j = 0; j < t.cols(); ++j)
          t(l, j) = design.base_beta(j) != 0.0 ? design.base_beta(j) + shift : 0.0;
      }
      return t;
    }
    case Pattern::regional: {
      Eigen::MatrixXd t(nl, design.region_beta.cols());
      for (Eigen::Index l = 0; l < nl; ++l) {
        const auto it = design.regions.find(locations[l]);
        if (it == design.regions.end())
          throw InvalidArgument("no region for location '" + locations[l] + "'");
        t.row(l) = design.region_beta.row(it->second);
      }
      return t;
    }
  }
  throw InvalidArgument("unknown pattern");
}

Dataset generate_dataset(const SimulationDesign& design, const std::vector<std::string>& locations,
                         const Eigen::MatrixXd& truth, std::uint64_t replicate_seed) {
  if (truth.rows() != static_cast<Eigen::Index>(locations.size()))
    throw InvalidArgument("truth rows differ from location count");
  const auto m = static_cast<Eigen::Index>(design.obs_per_location);
  const Eigen::Index n = m * truth.rows();
  const Eigen::Index p = truth.cols();

  Engine rng(replicate_seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Dataset data;
  data.y.resize(n);
  data.X.resize(n, p);
  data.location.reserve(n);
  for (Eigen::Index j = 0; j < p; ++j) data.covariate_names.push_back("x" + std::to_string(j + 1));

  Eigen::Index i = 0;
  for (Eigen::Index l = 0; l < truth.rows(); ++l) {
    for (Eigen::Index k = 0; k < m; ++k, ++i) {
      for (Eigen::Index j = 0; j < p; ++j) data.X(i, j) = normal(rng);
      const double eps = normal(rng);
      data.y(i) = data.X.row(i).dot(truth.row(l)) + design.noise_sd * eps;
      data.location.push_back(locations[l]);
    }
  }
  return data;
}

MethodReport metrics(const std::vector<ReplicateEstimates>& reps, const Eigen::MatrixXd& truth) {
  if (reps.empty()) throw InvalidArgument("no replicates");
  const Eigen::Index nl = truth.rows();
  const Eigen::Index p = truth.cols();
  for (const auto& r : reps)
    if (r.estimate.rows() != nl || r.estimate.cols() != p)
      throw InvalidArgument("replicate estimate shape differs from truth");

  const bool has_hpd = std::all_of(reps.begin(), reps.end(), [&](const ReplicateEstimates& r) {
    return r.hpd_lower.rows() == nl && r.hpd_upper.rows() == nl;
  });
  const bool has_selection = std::all_of(reps.begin(), reps.end(), [&](const ReplicateEstimates& r) {
    return r.selected.size() == static_cast<std::size_t>(p);
  });

  const double nr = static_cast<double>(reps.size());
  MethodReport out;
  out.replicates = reps.size();
  out.coefficients.resize(p);
  for (Eigen::Index j = 0; j < p; ++j) {
    auto& c = out.coefficients[j];
    c.in_model = (truth.col(j).array() != 0.0).any();
    double mean_sum = 0.0, mab = 0.0, msd = 0.0, mmse = 0.0, mcr = 0.0;
    for (Eigen::Index l = 0; l < nl; ++l) {
      const double t = truth(l, j);
      double avg = 0.0;
      for (const auto& r : reps) avg += r.estimate(l, j);
      avg /= nr;
      double abs_err = 0.0, sq_err = 0.0, dev = 0.0, covered = 0.0;
      for (const auto& r : reps) {
        const double e = r.estimate(l, j);
        abs_err += std::abs(e - t);
        sq_err += (e - t) * (e - t);
        dev += (e - avg) * (e - avg);
        if (has_hpd && r.hpd_lower(l, j) <= t && t <= r.hpd_upper(l, j)) covered += 1.0;
      }
      mean_sum += avg;
      mab += abs_err / nr;
      mmse += sq_err / nr;
      msd += reps.size() > 1 ? std::sqrt(dev / (nr - 1.0)) : 0.0;
      mcr += covered / nr;
    }
    const double dl = static_cast<double>(nl);
    c.mean_estimate = mean_sum / dl;
    c.mab = mab / dl;
    c.msd = msd / dl;
    c.mmse = mmse / dl;
    if (has_hpd) c.mcr = mcr / dl;
    if (has_selection) {
      double correct = 0.0;
      for (const auto& r : reps) correct += (r.selected[j] == 1) == c.in_model ? 1.0 : 0.0;
      c.acc = correct / nr;
    }
  }
  if (has_selection) {
    double exact = 0.0;
    for (const auto& r : reps) {
      bool ok = true;
      for (Eigen::Index j = 0; j < p; ++j) ok = ok && ((r.selected[j] == 1) == out.coefficients[j].in_model);
      exact += ok ? 1.0 : 0.0;
    }
    out.model_acc = exact / nr;
  }
  double bw = 0.0, pd = 0.0;
  for (const auto& r : reps) {
    bw += r.bandwidth;
    pd += r.effective_params;
  }
  out.mean_bandwidth = bw / nr;
  out.mean_effective_params = pd / nr;
  return out;
}

namespace {

struct ReplicateOutcome {
  std::optional<ReplicateEstimates> bayes;
  std::optional<ReplicateEstimates> freq;
  double dic = 0.0, dic_alt = 0.0, lpml = 0.0;
  std::vector<ReplicateError> errors;
};

// Rows of a fit follow the data's location order; map them onto `locations`.
Eigen::MatrixXd align_rows(const Eigen::MatrixXd& m, const std::vector<std::string>& from,
                           const std::vector<std::string>& to) {
  if (from == to) return m;
  Eigen::MatrixXd out(to.size(), m.cols());
  for (std::size_t l = 0; l < to.size(); ++l) {
    const auto it = std::find(from.begin(), from.end(), to[l]);
    if (it == from.end()) throw Error("fit has no estimate for '" + to[l] + "'");
    out.row(l) = m.row(it - from.begin());
  }
  return out;
}

ReplicateOutcome run_replicate(int r, const SimulationDesign& design, const DistanceMatrix& d,
                               const std::vector<std::string>& locations, const Eigen::MatrixXd& truth,
                               const StudyConfig& cfg) {
  ReplicateOutcome out;
  const auto ri = static_cast<std::uint64_t>(r);
  const Dataset data = generate_dataset(
      design, locations, truth, derive_seed(design.seed, {static_cast<std::uint64_t>(Stream::data), ri}));

  if (cfg.run_bayes) {
    try {
      BayesConfig bc = cfg.bayes;
      bc.seed = derive_seed(design.seed, {static_cast<std::uint64_t>(Stream::chain), ri});
      const GwrPosterior post = run_sampler(data, d, cfg.kernel, bc);
      const PosteriorSummary sum = posterior_summary(post);
      const ModelAssessment a = assess(post, data, d);

      ReplicateEstimates est;
      est.estimate = align_rows(sum.beta_mean, sum.locations, locations);
      Eigen::MatrixXd lo(sum.locations.size(), post.p), hi(sum.locations.size(), post.p);
      for (std::size_t l = 0; l < sum.locations.size(); ++l)
        for (std::size_t j = 0; j < post.p; ++j) {
          lo(l, j) = sum.beta_hpd[l][j].lower;
          hi(l, j) = sum.beta_hpd[l][j].upper;
        }
      est.hpd_lower = align_rows(lo, sum.locations, locations);
      est.hpd_upper = align_rows(hi, sum.locations, locations);
      est.selected = sum.gamma_mode;
      est.bandwidth = sum.b_mean;
      est.effective_params = a.p_d;
      out.bayes = std::move(est);
      out.dic = a.dic;
      out.dic_alt = a.dic_alt;
      out.lpml = a.lpml;
    } catch (const std::exception& e) {
      out.errors.push_back({r, "bayes", e.what()});
    }
  }

  if (cfg.run_freq) {
    try {
      const auto grid = default_bandwidth_grid(d);
      const auto sel = select_bandwidth_grid(data, cfg.kernel, d, grid, cfg.freq_criterion);
      const FreqFit fit = fit_all_locations(data, {cfg.kernel, sel.best}, d);
      ReplicateEstimates est;
      est.estimate = align_rows(fit.beta_hat, fit.locations, locations);
      est.bandwidth = sel.best;
      est.effective_params = fit.effective_params;
      out.freq = std::move(est);
    } catch (const std::exception& e) {
      out.errors.push_back({r, "freq", e.what()});
    }
  }
  return out;
}

}  // namespace

SimulationReport run_study(const SimulationDesign& design, const DistanceMatrix& d, const StudyConfig& cfg) {
  design.validate();
  cfg.bayes.validate();

  SimulationReport report;
  report.pattern = design.pattern;
  report.locations = d.labels;
  std::optional<MdsEmbedding> embedding;
  if (design.pattern == Pattern::mds_linear) embedding = mds_embed(d);
  report.truth = true_beta(design, report.locations, embedding ? &*embedding : nullptr);

  const int n = design.replicates;
  std::vector<ReplicateOutcome> outcomes(n);
  std::atomic<int> next{0};
  std::mutex failure_mutex;
  std::exception_ptr failure;
  auto worker = [&] {
    for (int r = next++; r < n; r = next++) {
      try {
        outcomes[r] = run_replicate(r, design, d, report.locations, report.truth, cfg);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(cfg.threads, static_cast<unsigned>(n)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  for (auto& o : outcomes) {
    if (o.bayes) {
      report.bayes_replicates.push_back(std::move(*o.bayes));
      report.bayes_dic.push_back(o.dic);
      report.bayes_dic_alt.push_back(o.dic_alt);
      report.bayes_lpml.push_back(o.lpml);
    }
    if (o.freq) report.freq_replicates.push_back(std::move(*o.freq));
    report.errors.insert(report.errors.end(), o.errors.begin(), o.errors.end());
  }
  if (!report.bayes_replicates.empty()) report.bayes = metrics(report.bayes_replicates, report.truth);
  if (!report.freq_replicates.empty()) report.freq = metrics(report.freq_replicates, report.truth);
  return report;
}

}  // namespace bgwr
