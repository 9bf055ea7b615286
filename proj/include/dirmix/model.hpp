#pragma once

#include <cstdint>
#include <vector>

#include "dirmix/matrix.hpp"

namespace dirmix {

/// Fixed hyperparameters: delta weights the symmetric Dirichlet prior on
/// allocations, alpha ~ Exp(gamma), beta ~ Gamma(phi, lambda).
struct Hyperparams {
  double delta = 0.5;
  double gamma = 0.2;
  double phi = 5.0;
  double lambda = 6.0;

  void check() const;
};

/// Current state of one Markov chain: allocations z (0-based labels),
/// the k x r concentration matrix, and the two hyperprior scalars.
struct ChainState {
  std::vector<int> z;
  Matrix rho;
  double alpha = 1.0;
  double beta = 1.0;
};

enum class AllocationMode { gibbs, metropolis };

struct SamplerConfig {
  int k = 1;
  long iterations = 0;
  long burn_in = 0;
  long thin = 1;
  double sigma_alpha = 0.5;
  double p_var = 0.7;
  Hyperparams hyper;
  AllocationMode allocation_mode = AllocationMode::gibbs;
  std::uint64_t seed = 0;

  void check() const;
  long stored_draws() const { return (iterations - burn_in) / thin; }
};

struct AcceptCounter {
  long proposals = 0;
  long accepts = 0;
  double rate() const { return proposals == 0 ? 0.0 : static_cast<double>(accepts) / proposals; }
};

/// Per-block acceptance bookkeeping for one chain. rho is indexed
/// row-major by (l, i); allocations is populated in metropolis mode only.
struct AcceptStats {
  AcceptCounter alpha;
  std::vector<AcceptCounter> rho;
  AcceptCounter allocations;
};

/// Thinned posterior draws of one chain, with the per-draw classification
/// probability matrix and unnormalized log posterior.
struct Trace {
  std::vector<ChainState> draws;
  std::vector<Matrix> class_probs;  // n x k per draw
  std::vector<double> log_post;
  std::vector<long> iteration;      // absolute sweep index per stored draw
  AcceptStats accept;
  int k = 0;
  std::size_t n = 0;
  std::size_t r = 0;
  std::uint64_t seed = 0;

  std::size_t size() const { return draws.size(); }
};

}  // namespace dirmix
