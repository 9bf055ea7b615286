#include "dirmix/sampler.hpp"

#include <cmath>
#include <thread>

#include "dirmix/dirichlet.hpp"
#include "dirmix/errors.hpp"
#include "dirmix/special.hpp"

namespace dirmix {

void Hyperparams::check() const {
  if (!(delta > 0.0) || !(gamma > 0.0) || !(phi > 0.0) || !(lambda > 0.0))
    throw ConfigError("hyperparameters delta, gamma, phi, lambda must all be positive");
}

void SamplerConfig::check() const {
  if (k < 1) throw ConfigError("k must be >= 1");
  if (iterations < 1) throw ConfigError("iterations must be >= 1");
  if (burn_in < 0 || burn_in >= iterations) throw ConfigError("burn_in must satisfy 0 <= burn_in < iterations");
  if (thin < 1) throw ConfigError("thin must be >= 1");
  if (!(sigma_alpha > 0.0)) throw ConfigError("sigma_alpha must be positive");
  if (!(p_var > 0.0)) throw ConfigError("p_var must be positive");
  hyper.check();
}

double log_allocation_prior_counts(std::span<const long> counts, double delta) {
  const int k = static_cast<int>(counts.size());
  long n = 0;
  double sum = 0.0;
  for (long c : counts) {
    n += c;
    sum += std::lgamma(static_cast<double>(c) + delta);
  }
  return std::lgamma(k * delta) - k * std::lgamma(delta) + sum -
         std::lgamma(static_cast<double>(n) + k * delta);
}

double log_allocation_prior(std::span<const int> z, int k, double delta) {
  std::vector<long> counts(k, 0);
  for (int label : z) {
    if (label < 0 || label >= k) throw DomainError("allocation label out of range");
    ++counts[label];
  }
  return log_allocation_prior_counts(counts, delta);
}

double proposal_sigma(double rho, double p_var) {
  if (!(rho > 0.0) || !(p_var > 0.0)) throw DomainError("proposal_sigma requires positive inputs");
  // Solve (exp(s^2) - 1) exp(2 log rho + s^2) = p_var * rho for s:
  // exp(s^2) is the positive root of a quadratic, written as 1 + x with
  // x = 2 v / (sqrt(rho^4 + 4 v rho^2) + rho^2) so tiny variances do not
  // round away inside log.
  const double v = p_var * rho;
  const double m2 = rho * rho;
  const double x = 2.0 * v / (std::sqrt(m2 * m2 + 4.0 * v * m2) + m2);
  return std::sqrt(std::log1p(x));
}

GammaParams beta_update_params(const Matrix& rho, double alpha, const Hyperparams& hyper) {
  double rho_sum = 0.0;
  for (double v : rho.data()) rho_sum += v;
  const double rk = static_cast<double>(rho.rows() * rho.cols());
  return {hyper.phi + rk * alpha, hyper.lambda + rho_sum};
}

namespace {

double log_normal_logpdf(double x, double log_median, double sigma) {
  const double d = std::log(x) - log_median;
  return -std::log(x) - std::log(sigma) - 0.5 * std::log(2.0 * M_PI) -
         d * d / (2.0 * sigma * sigma);
}

/// Gamma(alpha, beta) log density without the point's normalizing constant
/// dropped: alpha log beta - lgamma(alpha) + (alpha-1) log x - beta x.
double gamma_logpdf(double x, double shape, double rate) {
  return shape * std::log(rate) - std::lgamma(shape) + (shape - 1.0) * std::log(x) - rate * x;
}

/// Conditional log target for alpha (up to an additive constant):
/// k r alpha log beta - k r lgamma(alpha) + (alpha - 1) sum log rho - gamma alpha.
double alpha_log_target(double alpha, double beta, double sum_log_rho, double kr, double gamma) {
  return kr * alpha * std::log(beta) - kr * std::lgamma(alpha) +
         (alpha - 1.0) * sum_log_rho - gamma * alpha;
}

}  // namespace

Sampler::Sampler(Matrix data_values, SamplerConfig config)
    : data_(std::move(data_values)), config_(std::move(config)) {
  config_.check();
  log_data_ = Matrix(data_.rows(), data_.cols());
  for (std::size_t idx = 0; idx < data_.size(); ++idx)
    log_data_.data()[idx] = std::log(data_.data()[idx]);
}

Sampler::Sampler(const CompositionDataset& data, SamplerConfig config)
    : Sampler(data.values(), std::move(config)) {}

ChainState Sampler::init_state(Rng& rng) const {
  // Prior draws start the chain inside the support; extreme tail draws are
  // floored so log-scale updates stay finite (a small alpha makes Gamma
  // variates underflow to exactly zero in double precision).
  constexpr double floor = 1e-8;
  ChainState state;
  state.z.resize(n());
  for (auto& label : state.z) label = draw_uniform_int(rng, config_.k);
  state.alpha = std::max(draw_exponential(rng, config_.hyper.gamma), floor);
  state.beta = std::max(draw_gamma(rng, config_.hyper.phi, config_.hyper.lambda), floor);
  state.rho = Matrix(config_.k, r());
  for (double& v : state.rho.data()) v = std::max(draw_gamma(rng, state.alpha, state.beta), floor);
  return state;
}

std::vector<long> Sampler::label_counts(std::span<const int> z) const {
  std::vector<long> counts(config_.k, 0);
  for (int label : z) ++counts[label];
  return counts;
}

void Sampler::classification_row(const ChainState& state, std::span<const long> counts_minus_j,
                                 std::size_t j, std::span<const double> cluster_const,
                                 std::span<double> out) const {
  const int k = config_.k;
  const auto log_p = log_data_.row(j);
  for (int l = 0; l < k; ++l) {
    const auto rho_l = state.rho.row(l);
    double dot = 0.0;
    for (std::size_t i = 0; i < rho_l.size(); ++i) dot += (rho_l[i] - 1.0) * log_p[i];
    out[l] = cluster_const[l] + dot +
             std::log(static_cast<double>(counts_minus_j[l]) + config_.hyper.delta);
  }
  const double lse = log_sum_exp(out);
  double total = 0.0;
  for (int l = 0; l < k; ++l) {
    out[l] = std::exp(out[l] - lse);
    total += out[l];
  }
  for (int l = 0; l < k; ++l) out[l] /= total;
}

Matrix Sampler::update_allocations_gibbs(ChainState& state, Rng& rng) const {
  const int k = config_.k;
  std::vector<long> counts = label_counts(state.z);
  std::vector<double> cluster_const(k);
  for (int l = 0; l < k; ++l) {
    const auto rho_l = state.rho.row(l);
    double rho0 = 0.0, lg = 0.0;
    for (double v : rho_l) {
      rho0 += v;
      lg += std::lgamma(v);
    }
    cluster_const[l] = std::lgamma(rho0) - lg;
  }

  Matrix m(n(), k);
  for (std::size_t j = 0; j < n(); ++j) {
    --counts[state.z[j]];
    auto row = m.row(j);
    classification_row(state, counts, j, cluster_const, row);
    state.z[j] = draw_categorical(rng, row);
    ++counts[state.z[j]];
  }
  return m;
}

void Sampler::update_allocations_metropolis(ChainState& state, Rng& rng,
                                            AcceptCounter& counter) const {
  const int k = config_.k;
  std::vector<long> counts = label_counts(state.z);
  std::vector<double> cluster_const(k);
  for (int l = 0; l < k; ++l) {
    const auto rho_l = state.rho.row(l);
    double rho0 = 0.0, lg = 0.0;
    for (double v : rho_l) {
      rho0 += v;
      lg += std::lgamma(v);
    }
    cluster_const[l] = std::lgamma(rho0) - lg;
  }

  auto log_weight = [&](std::size_t j, int l, long count_minus_j) {
    const auto log_p = log_data_.row(j);
    const auto rho_l = state.rho.row(l);
    double dot = 0.0;
    for (std::size_t i = 0; i < rho_l.size(); ++i) dot += (rho_l[i] - 1.0) * log_p[i];
    return cluster_const[l] + dot +
           std::log(static_cast<double>(count_minus_j) + config_.hyper.delta);
  };

  for (std::size_t j = 0; j < n(); ++j) {
    const int current = state.z[j];
    const int proposed = draw_uniform_int(rng, k);
    ++counter.proposals;
    if (proposed == current) {
      ++counter.accepts;
      continue;
    }
    const double log_ratio = log_weight(j, proposed, counts[proposed]) -
                             log_weight(j, current, counts[current] - 1);
    if (log_ratio >= 0.0 || std::log(draw_uniform(rng)) < log_ratio) {
      --counts[current];
      ++counts[proposed];
      state.z[j] = proposed;
      ++counter.accepts;
    }
  }
}

bool Sampler::update_alpha(ChainState& state, Rng& rng) const {
  const double kr = static_cast<double>(config_.k) * static_cast<double>(r());
  double sum_log_rho = 0.0;
  for (double v : state.rho.data()) sum_log_rho += std::log(v);

  const double current = state.alpha;
  const double proposed = std::exp(std::log(current) + config_.sigma_alpha * draw_normal(rng));
  // Log-normal proposal with median at the current state; the Jacobian
  // correction reduces to log(proposed) - log(current).
  const double log_ratio =
      alpha_log_target(proposed, state.beta, sum_log_rho, kr, config_.hyper.gamma) -
      alpha_log_target(current, state.beta, sum_log_rho, kr, config_.hyper.gamma) +
      std::log(proposed) - std::log(current);
  if (log_ratio >= 0.0 || std::log(draw_uniform(rng)) < log_ratio) {
    state.alpha = proposed;
    return true;
  }
  return false;
}

void Sampler::update_beta(ChainState& state, Rng& rng) const {
  const GammaParams g = beta_update_params(state.rho, state.alpha, config_.hyper);
  state.beta = draw_gamma(rng, g.shape, g.rate);
}

void Sampler::update_rho(ChainState& state, Rng& rng, std::span<AcceptCounter> counters) const {
  const int k = config_.k;
  const std::size_t dims = r();

  // Sufficient statistics per cluster: member count and sum of log p.
  std::vector<long> counts = label_counts(state.z);
  Matrix log_p_sums(k, dims, 0.0);
  for (std::size_t j = 0; j < n(); ++j) {
    auto dst = log_p_sums.row(state.z[j]);
    const auto src = log_data_.row(j);
    for (std::size_t i = 0; i < dims; ++i) dst[i] += src[i];
  }

  for (int l = 0; l < k; ++l) {
    auto rho_l = state.rho.row(l);
    const double n_l = static_cast<double>(counts[l]);
    const auto s_l = log_p_sums.row(l);
    double rho_sum = 0.0;
    for (double v : rho_l) rho_sum += v;

    for (std::size_t i = 0; i < dims; ++i) {
      AcceptCounter& counter = counters[static_cast<std::size_t>(l) * dims + i];
      ++counter.proposals;

      const double current = rho_l[i];
      const double sigma_cur = proposal_sigma(current, config_.p_var);
      const double proposed = std::exp(std::log(current) + sigma_cur * draw_normal(rng));
      if (proposed == current) {  // degenerate scale: ratio is exactly 1
        ++counter.accepts;
        continue;
      }
      const double sigma_prop = proposal_sigma(proposed, config_.p_var);
      const double sum_prop = rho_sum - current + proposed;

      // Conditional target: cluster-l likelihood terms involving rho_li
      // plus the Gamma(alpha, beta) prior. For an empty cluster the data
      // terms vanish and the target reduces to the prior.
      double log_ratio = n_l * (std::lgamma(sum_prop) - std::lgamma(rho_sum)) -
                         n_l * (std::lgamma(proposed) - std::lgamma(current)) +
                         (proposed - current) * s_l[i] +
                         (state.alpha - 1.0) * (std::log(proposed) - std::log(current)) -
                         state.beta * (proposed - current);
      // Asymmetric proposal: scale depends on the departure point.
      log_ratio += log_normal_logpdf(current, std::log(proposed), sigma_prop) -
                   log_normal_logpdf(proposed, std::log(current), sigma_cur);

      if (log_ratio >= 0.0 || std::log(draw_uniform(rng)) < log_ratio) {
        rho_l[i] = proposed;
        rho_sum = sum_prop;
        ++counter.accepts;
      }
    }
  }
}

Matrix Sampler::classification_probs(const ChainState& state) const {
  const int k = config_.k;
  std::vector<long> counts = label_counts(state.z);
  std::vector<double> cluster_const(k);
  for (int l = 0; l < k; ++l) {
    const auto rho_l = state.rho.row(l);
    double rho0 = 0.0, lg = 0.0;
    for (double v : rho_l) {
      rho0 += v;
      lg += std::lgamma(v);
    }
    cluster_const[l] = std::lgamma(rho0) - lg;
  }
  Matrix m(n(), k);
  for (std::size_t j = 0; j < n(); ++j) {
    --counts[state.z[j]];
    classification_row(state, counts, j, cluster_const, m.row(j));
    ++counts[state.z[j]];
  }
  return m;
}

double Sampler::log_posterior(const ChainState& state) const {
  const Hyperparams& h = config_.hyper;
  double lp = 0.0;
  for (std::size_t j = 0; j < n(); ++j)
    lp += dirichlet_logpdf_from_logs(log_data_.row(j), state.rho.row(state.z[j]));
  for (double v : state.rho.data()) lp += gamma_logpdf(v, state.alpha, state.beta);
  if (n() > 0) lp += log_allocation_prior(state.z, config_.k, h.delta);
  lp += std::log(h.gamma) - h.gamma * state.alpha;
  lp += gamma_logpdf(state.beta, h.phi, h.lambda);
  return lp;
}

Trace Sampler::run() const {
  Rng rng(config_.seed);
  ChainState state = init_state(rng);

  Trace trace;
  trace.k = config_.k;
  trace.n = n();
  trace.r = r();
  trace.seed = config_.seed;
  trace.accept.rho.assign(static_cast<std::size_t>(config_.k) * r(), AcceptCounter{});
  const long stored = config_.stored_draws();
  trace.draws.reserve(stored);
  trace.class_probs.reserve(stored);
  trace.log_post.reserve(stored);
  trace.iteration.reserve(stored);

  for (long t = 1; t <= config_.iterations; ++t) {
    Matrix sweep_probs;
    if (config_.allocation_mode == AllocationMode::gibbs) {
      sweep_probs = update_allocations_gibbs(state, rng);
    } else {
      update_allocations_metropolis(state, rng, trace.accept.allocations);
    }
    ++trace.accept.alpha.proposals;
    if (update_alpha(state, rng)) ++trace.accept.alpha.accepts;
    update_beta(state, rng);
    update_rho(state, rng, trace.accept.rho);

    if (t > config_.burn_in && (t - config_.burn_in) % config_.thin == 0) {
      trace.draws.push_back(state);
      trace.class_probs.push_back(config_.allocation_mode == AllocationMode::gibbs
                                      ? std::move(sweep_probs)
                                      : classification_probs(state));
      trace.log_post.push_back(log_posterior(state));
      trace.iteration.push_back(t);
    }
  }
  return trace;
}

double log_posterior(const ChainState& state, const CompositionDataset& data,
                     const Hyperparams& hyper) {
  if (state.z.size() != data.n() || state.rho.cols() != data.parts())
    throw DomainError("state dimensions do not match dataset");
  SamplerConfig cfg;
  cfg.k = static_cast<int>(state.rho.rows());
  cfg.iterations = 1;
  cfg.hyper = hyper;
  return Sampler(data.values(), cfg).log_posterior(state);
}

Trace run_chain(const CompositionDataset& data, const SamplerConfig& config) {
  return Sampler(data, config).run();
}

std::vector<Trace> run_chains(const CompositionDataset& data, const SamplerConfig& base,
                              int chains, std::uint64_t master_seed) {
  if (chains < 1) throw ConfigError("chain count must be >= 1");
  std::vector<Trace> traces(chains);
  std::vector<std::exception_ptr> errors(chains);
  std::vector<std::thread> workers;
  workers.reserve(chains);
  for (int c = 0; c < chains; ++c) {
    workers.emplace_back([&, c] {
      try {
        SamplerConfig cfg = base;
        cfg.seed = derive_seed(master_seed, static_cast<std::uint64_t>(c));
        traces[static_cast<std::size_t>(c)] = run_chain(data, cfg);
      } catch (...) {
        errors[static_cast<std::size_t>(c)] = std::current_exception();
      }
    });
  }
  for (auto& w : workers) w.join();
  for (const std::exception_ptr& e : errors)
    if (e) std::rethrow_exception(e);
  return traces;
}

}  // namespace dirmix
