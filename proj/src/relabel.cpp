#include "dirmix/relabel.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <numeric>

#include "dirmix/errors.hpp"

namespace dirmix {

std::vector<int> assignment_min_cost(const Matrix& cost) {
  const int k = static_cast<int>(cost.rows());
  if (k == 0 || cost.cols() != cost.rows()) throw DomainError("assignment needs a square matrix");
  if (k > 20) throw ConfigError("assignment solver supports up to 20 components");
  const std::size_t full = std::size_t{1} << k;
  const double inf = std::numeric_limits<double>::infinity();

  // dp[mask]: minimal cost of assigning rows 0..popcount(mask)-1 to the
  // column set `mask`; parent tracks the column chosen for the last row.
  std::vector<double> dp(full, inf);
  std::vector<int> parent(full, -1);
  dp[0] = 0.0;
  for (std::size_t mask = 0; mask < full; ++mask) {
    if (dp[mask] == inf) continue;
    const int row = std::popcount(mask);
    if (row == k) continue;
    for (int col = 0; col < k; ++col) {
      if (mask & (std::size_t{1} << col)) continue;
      const std::size_t next = mask | (std::size_t{1} << col);
      const double c = dp[mask] + cost(row, col);
      if (c < dp[next]) {
        dp[next] = c;
        parent[next] = col;
      }
    }
  }

  std::vector<int> perm(k);
  std::size_t mask = full - 1;
  for (int row = k - 1; row >= 0; --row) {
    const int col = parent[mask];
    perm[row] = col;
    mask &= ~(std::size_t{1} << col);
  }
  return perm;
}

namespace {

bool is_identity(const std::vector<int>& perm) {
  for (std::size_t i = 0; i < perm.size(); ++i)
    if (perm[i] != static_cast<int>(i)) return false;
  return true;
}

void apply_permutation(ChainState& state, Matrix& probs, const std::vector<int>& perm) {
  if (is_identity(perm)) return;
  const int k = static_cast<int>(perm.size());
  const std::size_t r = state.rho.cols();
  const std::size_t n = probs.rows();

  Matrix rho(state.rho.rows(), r);
  Matrix m(n, k);
  std::vector<int> inverse(k);
  for (int slot = 0; slot < k; ++slot) {
    inverse[perm[slot]] = slot;
    for (std::size_t i = 0; i < r; ++i) rho(slot, i) = state.rho(perm[slot], i);
    for (std::size_t j = 0; j < n; ++j) m(j, slot) = probs(j, perm[slot]);
  }
  for (int& label : state.z) label = inverse[label];
  state.rho = std::move(rho);
  probs = std::move(m);
}

}  // namespace

RelabelResult stephens_relabel(std::vector<Trace>& traces, int max_iter) {
  std::vector<ChainState*> draws;
  std::vector<Matrix*> probs;
  int k = 0;
  std::size_t n = 0;
  for (Trace& trace : traces) {
    if (trace.class_probs.size() != trace.draws.size())
      throw MissingClassProbs("trace lacks classification probabilities");
    for (std::size_t t = 0; t < trace.draws.size(); ++t) {
      draws.push_back(&trace.draws[t]);
      probs.push_back(&trace.class_probs[t]);
    }
    k = trace.k;
    n = trace.n;
  }

  RelabelResult result;
  const std::size_t total = draws.size();
  result.permutations.assign(total, {});
  if (total == 0) return result;

  std::vector<int> identity(k);
  std::iota(identity.begin(), identity.end(), 0);
  for (auto& p : result.permutations) p = identity;
  if (k == 1) {
    result.converged = true;
    return result;
  }

  // Current working permutation per draw; composed into result at the end.
  std::vector<std::vector<int>> current(total, identity);
  const double tiny = 1e-300;

  for (int iter = 0; iter < max_iter; ++iter) {
    ++result.iterations;

    Matrix log_q(n, k, 0.0);
    for (std::size_t t = 0; t < total; ++t) {
      const Matrix& m = *probs[t];
      const auto& perm = current[t];
      for (std::size_t j = 0; j < n; ++j)
        for (int l = 0; l < k; ++l) log_q(j, l) += m(j, perm[l]);
    }
    for (double& v : log_q.data()) v = std::log(std::max(v / static_cast<double>(total), tiny));

    bool changed = false;
    Matrix cost(k, k);
    for (std::size_t t = 0; t < total; ++t) {
      const Matrix& m = *probs[t];
      // cost(slot, col) = -sum_j M[j][col] log Q[j][slot]; the entropy term
      // of the KL divergence is permutation-invariant and dropped.
      for (int slot = 0; slot < k; ++slot)
        for (int col = 0; col < k; ++col) {
          double acc = 0.0;
          for (std::size_t j = 0; j < n; ++j) acc -= m(j, col) * log_q(j, slot);
          cost(slot, col) = acc;
        }
      std::vector<int> perm = assignment_min_cost(cost);
      if (perm != current[t]) {
        current[t] = std::move(perm);
        changed = true;
      }
    }
    if (!changed) {
      result.converged = true;
      break;
    }
  }

  for (std::size_t t = 0; t < total; ++t) {
    apply_permutation(*draws[t], *probs[t], current[t]);
    result.permutations[t] = current[t];
  }
  return result;
}

}  // namespace dirmix
