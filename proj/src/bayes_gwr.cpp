#include "bgwr/bayes_gwr.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "bgwr/error.hpp"
#include "bgwr/local_stats.hpp"
#include "bgwr/rng.hpp"

namespace bgwr {

void BayesConfig::validate() const {
  if (!(tau2 > 0.0)) throw InvalidArgument("tau2 must be > 0");
  if (!(c2 > 1.0)) throw InvalidArgument("c2 must be > 1");
  if (!(inclusion_prior > 0.0 && inclusion_prior < 1.0))
    throw InvalidArgument("inclusion prior must lie in (0, 1)");
  if (!(alpha1 > 0.0) || !(alpha2 > 0.0)) throw InvalidArgument("inverse-gamma parameters must be > 0");
  if (!(prior_upper > 0.0) || !std::isfinite(prior_upper)) throw InvalidArgument("D must be > 0");
  if (chain_length <= 0 || burn_in < 0 || burn_in >= chain_length)
    throw InvalidArgument("need 0 <= burn_in < chain_length");
  if (!(beta_prior_var > 0.0) || !(intercept_prior_var > 0.0))
    throw InvalidArgument("prior variances must be > 0");
  if (!(target_acceptance > 0.0 && target_acceptance < 1.0) || adapt_interval <= 0)
    throw InvalidArgument("invalid proposal adaptation settings");
  if (fixed_sigma2 && !(*fixed_sigma2 > 0.0)) throw InvalidArgument("fixed sigma2 must be > 0");
  if (fixed_bandwidth && !(*fixed_bandwidth >= 0.0)) throw InvalidArgument("fixed bandwidth must be >= 0");
  if (fixed_gamma)
    for (int g : *fixed_gamma)
      if (g != 0 && g != 1) throw InvalidArgument("fixed gamma entries must be 0 or 1");
}

std::vector<double> GwrPosterior::beta_samples(std::size_t l, std::size_t j) const {
  std::vector<double> out(draws);
  for (std::size_t t = 0; t < draws; ++t) out[t] = beta_at(t, l, j);
  return out;
}

std::vector<double> GwrPosterior::sigma2_samples(std::size_t l) const {
  std::vector<double> out(draws);
  for (std::size_t t = 0; t < draws; ++t) out[t] = sigma2_at(t, l);
  return out;
}

double GwrPosterior::inclusion_frequency(std::size_t j) const {
  if (draws == 0) return 0.0;
  std::size_t ones = 0;
  for (std::size_t t = 0; t < draws; ++t) ones += gamma_at(t, j);
  return static_cast<double>(ones) / static_cast<double>(draws);
}

double log_likelihood_location(const Dataset& data, const Eigen::VectorXd& beta, double sigma2,
                               const WeightMatrix& w) {
  if (!(sigma2 > 0.0)) throw InvalidArgument("sigma2 must be > 0");
  if (w.size() != data.n()) throw InvalidArgument("weight count differs from n");
  if (static_cast<std::size_t>(beta.size()) != data.p()) throw InvalidArgument("beta length differs from p");

  double count = 0.0;
  double logdet = 0.0;
  double quad = 0.0;
  for (std::size_t i = 0; i < data.n(); ++i) {
    if (!w.positive(i)) continue;
    const double r = data.y(i) - data.X.row(i).dot(beta);
    count += 1.0;
    logdet += w.log_weight(i);
    quad += w.weights[i] * r * r;
  }
  return -0.5 * (count * std::log(2.0 * std::numbers::pi) + count * std::log(sigma2) - logdet +
                 quad / sigma2);
}

namespace {

double reflect(double x, double upper) {
  const double period = 2.0 * upper;
  double y = std::fmod(x, period);
  if (y < 0.0) y += period;
  if (y > upper) y = period - y;
  return y;
}

class Sampler {
public:
  Sampler(const Dataset& data, const DistanceMatrix& d, Kernel kernel, const BayesConfig& cfg)
      : cfg_(cfg), kernel_(kernel), stats_(data, d), nl_(stats_.size()), p_(data.p()),
        rng_(make_engine(cfg.seed, {static_cast<std::uint64_t>(Stream::chain)})) {
    selectable_.assign(p_, cfg.variable_selection);
    if (data.intercept_included) selectable_[0] = false;
    if (cfg.fixed_gamma && cfg.fixed_gamma->size() != p_)
      throw InvalidArgument("fixed gamma length differs from p");
    initialize(data);
  }

  GwrPosterior run() {
    const int kept = cfg_.chain_length - cfg_.burn_in;
    GwrPosterior post;
    post.locations = stats_.groups().locations;
    post.kernel = kernel_;
    post.p = p_;
    post.draws = static_cast<std::size_t>(kept);
    post.beta.reserve(post.draws * nl_ * p_);
    post.sigma2.reserve(post.draws * nl_);
    post.gamma.reserve(post.draws * p_);
    post.tau2.reserve(post.draws * p_);
    post.b.reserve(post.draws);

    int window_accepts = 0;
    int window_tries = 0;
    int kept_accepts = 0;
    int kept_tries = 0;
    for (int it = 0; it < cfg_.chain_length; ++it) {
      update_gamma_blocks();
      update_tau2();
      update_beta();
      update_sigma2();
      if (sample_bandwidth()) {
        const bool acc = update_bandwidth();
        if (it < cfg_.burn_in) {
          window_accepts += acc;
          if (++window_tries == cfg_.adapt_interval) {
            adapt(static_cast<double>(window_accepts) / window_tries);
            window_accepts = window_tries = 0;
          }
        } else {
          kept_accepts += acc;
          ++kept_tries;
        }
      }
      if (it >= cfg_.burn_in) record(post);
    }
    post.acceptance_rate_b = kept_tries > 0 ? static_cast<double>(kept_accepts) / kept_tries : 0.0;
    post.proposal_scale_b = scale_;
    return post;
  }

private:
  bool sample_bandwidth() const { return !cfg_.fixed_bandwidth.has_value(); }

  LocationStats::Weighted stats_at(double b) const {
    if (cfg_.prior_only) return stats_.flat();
    return stats_.weighted({kernel_, b});
  }

  double prior_var(std::size_t j) const {
    if (intercept_ && j == 0) return cfg_.intercept_prior_var;
    if (!cfg_.variable_selection) return cfg_.beta_prior_var;
    return gamma_[j] ? cfg_.c2 * tau2_(j) : tau2_(j);
  }

  void initialize(const Dataset& data) {
    intercept_ = data.intercept_included;
    b_ = cfg_.fixed_bandwidth.value_or(0.5 * cfg_.prior_upper);
    scale_ = 0.1 * cfg_.prior_upper;
    tau2_ = Eigen::VectorXd::Constant(p_, cfg_.tau2);
    gamma_.assign(p_, 1);
    if (cfg_.fixed_gamma) gamma_ = *cfg_.fixed_gamma;
    for (std::size_t j = 0; j < p_; ++j)
      if (!selectable_[j]) gamma_[j] = 1;

    // Start from the WLS fit at the initial bandwidth.
    const auto start = stats_.weighted({kernel_, b_});
    const double var_y = data.n() > 1
        ? (data.y.array() - data.y.mean()).square().sum() / static_cast<double>(data.n() - 1)
        : 1.0;
    beta_ = Eigen::MatrixXd::Zero(nl_, p_);
    sigma2_ = Eigen::VectorXd::Zero(nl_);
    for (std::size_t s = 0; s < nl_; ++s) {
      const Eigen::LDLT<Eigen::MatrixXd> ldlt(start.xtwx[s]);
      Eigen::VectorXd b = ldlt.solve(start.xtwy[s]);
      if (ldlt.info() != Eigen::Success || !b.allFinite()) b.setZero();
      beta_.row(s) = b.transpose();
      const double dof = std::max(1.0, start.count(s) - static_cast<double>(p_));
      double s2 = LocationStats::quadratic(start, s, b) / dof;
      if (!(s2 > 1e-8) || !std::isfinite(s2)) s2 = var_y > 0.0 ? var_y : 1.0;
      sigma2_(s) = cfg_.fixed_sigma2.value_or(s2);
    }

    current_ = stats_at(b_);
    loglik_ = Eigen::VectorXd(nl_);
    for (std::size_t s = 0; s < nl_; ++s) loglik_(s) = location_loglik(current_, s);
    if (!std::isfinite(loglik_.sum())) throw Error("non-finite posterior density at initialization");
  }

  double location_loglik(const LocationStats::Weighted& w, std::size_t s) const {
    return LocationStats::log_likelihood(w, s, beta_.row(s).transpose(), sigma2_(s));
  }

  // Draw gamma_j with beta_j(.) integrated out, then beta_j(s) | gamma_j for
  // every location. Both conditionals are exact univariate normal algebra.
  void update_gamma_blocks() {
    if (!cfg_.variable_selection || cfg_.fixed_gamma) return;
    const double prior_logit = std::log(cfg_.inclusion_prior / (1.0 - cfg_.inclusion_prior));
    std::vector<double> a(nl_), r(nl_);
    for (std::size_t j = 0; j < p_; ++j) {
      if (!selectable_[j]) continue;
      const double v1 = cfg_.c2 * tau2_(j);
      const double v0 = tau2_(j);
      double logit = prior_logit;
      for (std::size_t s = 0; s < nl_; ++s) {
        const auto& g = current_.xtwx[s];
        double partial = current_.xtwy[s](j);
        for (std::size_t k = 0; k < p_; ++k)
          if (k != j) partial -= g(j, k) * beta_(s, k);
        a[s] = g(j, j) / sigma2_(s);
        r[s] = partial / sigma2_(s);
        logit += log_marginal(a[s], r[s], v1) - log_marginal(a[s], r[s], v0);
      }
      const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng_);
      gamma_[j] = std::log(u) - std::log1p(-u) < logit ? 1 : 0;

      const double v = gamma_[j] ? v1 : v0;
      for (std::size_t s = 0; s < nl_; ++s) {
        const double post_var = v / (1.0 + a[s] * v);
        beta_(s, j) = r[s] * post_var + std::sqrt(post_var) * normal_(rng_);
      }
    }
  }

  // log of  int N(beta; 0, v) exp(r beta - a beta^2 / 2) d beta, up to a v-free constant.
  static double log_marginal(double a, double r, double v) {
    const double denom = 1.0 + a * v;
    return -0.5 * std::log(denom) + 0.5 * r * r * v / denom;
  }

  void update_tau2() {
    if (!cfg_.tau_hyperprior || !cfg_.variable_selection) return;
    for (std::size_t j = 0; j < p_; ++j) {
      if (!selectable_[j]) continue;
      const double scale = gamma_[j] ? cfg_.c2 : 1.0;
      double ss = 0.0;
      for (std::size_t s = 0; s < nl_; ++s) ss += beta_(s, j) * beta_(s, j) / scale;
      tau2_(j) = draw_inverse_gamma(cfg_.alpha1 + 0.5 * static_cast<double>(nl_), cfg_.alpha2 + 0.5 * ss);
    }
  }

  void update_beta() {
    Eigen::VectorXd prior_prec(p_);
    for (std::size_t j = 0; j < p_; ++j) prior_prec(j) = 1.0 / prior_var(j);
    Eigen::VectorXd z(p_);
    for (std::size_t s = 0; s < nl_; ++s) {
      Eigen::MatrixXd prec = current_.xtwx[s] / sigma2_(s);
      prec.diagonal() += prior_prec;
      const Eigen::LLT<Eigen::MatrixXd> llt(prec);
      if (llt.info() != Eigen::Success) throw Error("posterior precision not positive definite");
      const Eigen::VectorXd mean = llt.solve(current_.xtwy[s] / sigma2_(s));
      for (std::size_t j = 0; j < p_; ++j) z(j) = normal_(rng_);
      beta_.row(s) = (mean + llt.matrixU().solve(z)).transpose();
    }
  }

  void update_sigma2() {
    for (std::size_t s = 0; s < nl_; ++s) {
      if (!cfg_.fixed_sigma2) {
        const double q = LocationStats::quadratic(current_, s, beta_.row(s).transpose());
        sigma2_(s) = draw_inverse_gamma(cfg_.alpha1 + 0.5 * current_.count(s), cfg_.alpha2 + 0.5 * q);
      }
      loglik_(s) = location_loglik(current_, s);
    }
  }

  bool update_bandwidth() {
    const double upper = cfg_.prior_upper;
    const double proposal = reflect(b_ + scale_ * normal_(rng_), upper);
    if (!(proposal > 0.0 && proposal < upper)) return false;

    auto cand = stats_at(proposal);
    Eigen::VectorXd cand_ll(nl_);
    for (std::size_t s = 0; s < nl_; ++s) cand_ll(s) = location_loglik(cand, s);
    const double log_ratio = cand_ll.sum() - loglik_.sum();
    const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng_);
    if (!(std::log(u) < log_ratio)) return false;

    b_ = proposal;
    current_ = std::move(cand);
    loglik_ = cand_ll;
    return true;
  }

  void adapt(double rate) {
    scale_ *= std::exp(rate - cfg_.target_acceptance);
    scale_ = std::clamp(scale_, 1e-6 * cfg_.prior_upper, cfg_.prior_upper);
  }

  double draw_inverse_gamma(double shape, double rate) {
    std::gamma_distribution<double> gamma(shape, 1.0 / rate);
    double g = gamma(rng_);
    while (!(g > 0.0)) g = gamma(rng_);
    return 1.0 / g;
  }

  void record(GwrPosterior& post) const {
    for (std::size_t s = 0; s < nl_; ++s)
      for (std::size_t j = 0; j < p_; ++j) post.beta.push_back(beta_(s, j));
    for (std::size_t s = 0; s < nl_; ++s) post.sigma2.push_back(sigma2_(s));
    for (std::size_t j = 0; j < p_; ++j) {
      post.gamma.push_back(static_cast<std::uint8_t>(gamma_[j]));
      post.tau2.push_back(tau2_(j));
    }
    post.b.push_back(b_);
  }

  const BayesConfig& cfg_;
  Kernel kernel_;
  LocationStats stats_;
  std::size_t nl_;
  std::size_t p_;
  Engine rng_;
  std::normal_distribution<double> normal_{0.0, 1.0};

  bool intercept_ = false;
  std::vector<bool> selectable_;
  std::vector<int> gamma_;
  Eigen::VectorXd tau2_;
  Eigen::MatrixXd beta_;
  Eigen::VectorXd sigma2_;
  double b_ = 0.0;
  double scale_ = 0.0;
  LocationStats::Weighted current_;
  Eigen::VectorXd loglik_;
};

}  // namespace

GwrPosterior run_sampler(const Dataset& data, const DistanceMatrix& d, Kernel kernel, const BayesConfig& cfg) {
  cfg.validate();
  data.validate(d);
  Sampler sampler(data, d, kernel, cfg);
  return sampler.run();
}

HpdInterval hpd_interval(std::span<const double> samples, double mass) {
  if (samples.empty()) throw InvalidArgument("HPD of an empty sample");
  if (!(mass > 0.0 && mass <= 1.0)) throw InvalidArgument("HPD mass must lie in (0, 1]");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  const auto k = std::min(n, static_cast<std::size_t>(std::ceil(mass * static_cast<double>(n) - 1e-9)));
  const std::size_t span = std::max<std::size_t>(k, 1) - 1;

  std::size_t best = 0;
  for (std::size_t i = 1; i + span < n; ++i)
    if (sorted[i + span] - sorted[i] < sorted[best + span] - sorted[best]) best = i;
  return {sorted[best], sorted[best + span], mass};
}

PosteriorSummary posterior_summary(const GwrPosterior& post, double mass) {
  const std::size_t nl = post.num_locations();
  PosteriorSummary s;
  s.locations = post.locations;
  s.beta_mean = Eigen::MatrixXd::Zero(nl, post.p);
  s.sigma2_mean = Eigen::VectorXd::Zero(nl);
  s.beta_hpd.assign(nl, std::vector<HpdInterval>(post.p));
  if (post.draws == 0) throw InvalidArgument("posterior has no draws");

  const double t = static_cast<double>(post.draws);
  for (std::size_t l = 0; l < nl; ++l) {
    for (std::size_t j = 0; j < post.p; ++j) {
      const auto draws = post.beta_samples(l, j);
      double sum = 0.0;
      for (double v : draws) sum += v;
      s.beta_mean(l, j) = sum / t;
      s.beta_hpd[l][j] = hpd_interval(draws, mass);
    }
    double sum = 0.0;
    for (std::size_t k = 0; k < post.draws; ++k) sum += post.sigma2_at(k, l);
    s.sigma2_mean(l) = sum / t;
  }
  for (std::size_t j = 0; j < post.p; ++j) {
    s.inclusion_frequency.push_back(post.inclusion_frequency(j));
    s.gamma_mode.push_back(s.inclusion_frequency.back() >= 0.5 ? 1 : 0);
  }
  double bsum = 0.0;
  for (double v : post.b) bsum += v;
  s.b_mean = bsum / t;
  return s;
}

std::vector<std::size_t> selected_model(std::span<const double> inclusion_frequency) {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < inclusion_frequency.size(); ++j)
    if (inclusion_frequency[j] >= 0.5) out.push_back(j);
  return out;
}

std::vector<std::size_t> selected_model(const GwrPosterior& post) {
  std::vector<double> freq(post.p);
  for (std::size_t j = 0; j < post.p; ++j) freq[j] = post.inclusion_frequency(j);
  return selected_model(freq);
}

}  // namespace bgwr
