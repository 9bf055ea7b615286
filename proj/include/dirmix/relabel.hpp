#pragma once

#include <vector>

#include "dirmix/model.hpp"

namespace dirmix {

struct RelabelResult {
  /// One permutation per stored draw, pooled over chains in chain order;
  /// perms[t][slot] = original column placed at `slot`.
  std::vector<std::vector<int>> permutations;
  int iterations = 0;
  bool converged = false;
};

/// Aligns mixture component labels across draws by iterative minimization
/// of the Kullback-Leibler divergence between each draw's classification
/// matrix and their running average, solving the k x k assignment problem
/// exactly per draw. Draw contents (z, rho rows, class-prob columns) are
/// permuted in place, consistently.
RelabelResult stephens_relabel(std::vector<Trace>& traces, int max_iter = 100);

/// Exact minimum-cost assignment on a square cost matrix; returns
/// perm[row] = column. Exhaustive dynamic program over column subsets.
std::vector<int> assignment_min_cost(const Matrix& cost);

}  // namespace dirmix
