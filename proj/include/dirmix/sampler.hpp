#pragma once

#include <span>
#include <vector>

#include "dirmix/dataset.hpp"
#include "dirmix/matrix.hpp"
#include "dirmix/model.hpp"
#include "dirmix/rng.hpp"

namespace dirmix {

/// Fully normalized log mass of an allocation vector under the collapsed
/// symmetric-Dirichlet prior:
///   log Gamma(k delta) - k log Gamma(delta)
///   + sum_l log Gamma(n_l + delta) - log Gamma(n + k delta).
double log_allocation_prior(std::span<const int> z, int k, double delta);
double log_allocation_prior_counts(std::span<const long> counts, double delta);

/// Unnormalized log posterior of the collapsed model: data likelihood,
/// Gamma(alpha, beta) prior on every rho entry, allocation prior, Exp(gamma)
/// prior on alpha and Gamma(phi, lambda) prior on beta. All terms carry
/// their normalizing constants.
double log_posterior(const ChainState& state, const CompositionDataset& data,
                     const Hyperparams& hyper);

/// Standard deviation of the log-Normal(log rho, sigma) proposal whose
/// variance is exactly p_var * rho.
double proposal_sigma(double rho, double p_var);

/// Shape and rate of the conjugate Gamma update for beta.
struct GammaParams {
  double shape;
  double rate;
};
GammaParams beta_update_params(const Matrix& rho, double alpha, const Hyperparams& hyper);

/// Metropolis-within-Gibbs engine for one chain. Kernels are public so
/// tests can drive individual blocks with everything else held fixed.
class Sampler {
public:
  Sampler(Matrix data_values, SamplerConfig config);
  Sampler(const CompositionDataset& data, SamplerConfig config);

  const SamplerConfig& config() const { return config_; }
  std::size_t n() const { return data_.rows(); }
  std::size_t r() const { return data_.cols(); }

  /// z drawn uniformly, alpha ~ Exp(gamma), beta ~ Gamma(phi, lambda),
  /// rho entries ~ Gamma(alpha, beta).
  ChainState init_state(Rng& rng) const;

  /// Sequential Gibbs sweep over allocations; returns the n x k matrix of
  /// classification probabilities evaluated as each observation is visited.
  Matrix update_allocations_gibbs(ChainState& state, Rng& rng) const;

  /// Sequential Metropolis sweep with a discrete-uniform proposal.
  void update_allocations_metropolis(ChainState& state, Rng& rng, AcceptCounter& counter) const;

  /// Log-normal random-walk update of alpha; returns the accept flag.
  bool update_alpha(ChainState& state, Rng& rng) const;

  /// Exact conjugate Gamma draw for beta.
  void update_beta(ChainState& state, Rng& rng) const;

  /// Per-entry Metropolis-Hastings sweep over rho with state-dependent
  /// proposal scale; visits entries in order l = 1..k, i = 1..r.
  void update_rho(ChainState& state, Rng& rng, std::span<AcceptCounter> counters) const;

  /// Classification probability matrix at the given state (rows sum to 1).
  Matrix classification_probs(const ChainState& state) const;

  double log_posterior(const ChainState& state) const;

  /// Full run: init, sweeps in order (z, alpha, beta, rho), burn-in and
  /// thinning per config. Deterministic for a fixed config seed.
  Trace run() const;

private:
  std::vector<long> label_counts(std::span<const int> z) const;
  void classification_row(const ChainState& state, std::span<const long> counts_minus_j,
                          std::size_t j, std::span<const double> cluster_const,
                          std::span<double> out) const;

  Matrix data_;      // n x r proportions
  Matrix log_data_;  // elementwise log
  SamplerConfig config_;
};

/// Runs one chain end to end.
Trace run_chain(const CompositionDataset& data, const SamplerConfig& config);

/// Runs `chains` independent chains concurrently; chain c is seeded with
/// derive_seed(master_seed, c).
std::vector<Trace> run_chains(const CompositionDataset& data, const SamplerConfig& base,
                              int chains, std::uint64_t master_seed);

}  // namespace dirmix
