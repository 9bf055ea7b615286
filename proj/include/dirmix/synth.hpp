#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dirmix/dataset.hpp"
#include "dirmix/matrix.hpp"

namespace dirmix {

/// Annotated Hellinger distance between two mixture components (0-based).
struct HellingerAnnotation {
  int first = 0;
  int second = 0;
  double value = 0.0;
};

struct Scenario {
  std::string label;
  Matrix rho_true;            // k x r
  std::vector<int> sizes;     // per-cluster observation counts
  std::uint64_t seed = 0;
  std::vector<HellingerAnnotation> hellinger;

  int k() const { return static_cast<int>(rho_true.rows()); }
  int n() const;
};

struct GeneratedData {
  CompositionDataset data;
  std::vector<int> labels;  // 0-based ground truth
};

/// Draws sizes[l] observations from Dirichlet(rho_l) per block, in block
/// order. Deterministic per scenario seed.
GeneratedData generate(const Scenario& scenario);

/// Splits n observations evenly over k blocks, remainder to the last blocks.
std::vector<int> even_sizes(int n, int k);

/// The six benchmark parameter configurations at both sample sizes
/// (30 and 50), with their annotated pairwise Hellinger distances.
std::vector<Scenario> scenario_library();

/// Looks a scenario up by label ("high2", "moderate3_n30", ...). Labels
/// without a size suffix default to n=50.
Scenario find_scenario(const std::string& label);

struct ConfusionResult {
  Matrix counts;      // true label (row) x estimated label (column)
  double accuracy = 0.0;  // permutation-maximized trace / n
  double ari = 0.0;
};

/// Confusion matrix plus permutation-maximized accuracy and the adjusted
/// Rand index of two labelings.
ConfusionResult confusion_matrix(const std::vector<int>& truth, const std::vector<int>& estimate);

}  // namespace dirmix
