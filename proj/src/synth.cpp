#include "dirmix/synth.hpp"

#include <algorithm>
#include <cmath>

#include "dirmix/dirichlet.hpp"
#include "dirmix/errors.hpp"
#include "dirmix/relabel.hpp"
#include "dirmix/rng.hpp"

namespace dirmix {

int Scenario::n() const {
  int total = 0;
  for (int s : sizes) total += s;
  return total;
}

GeneratedData generate(const Scenario& scenario) {
  if (scenario.sizes.empty() || scenario.rho_true.rows() != scenario.sizes.size())
    throw ConfigError("scenario sizes must match the parameter rows");
  for (int s : scenario.sizes)
    if (s < 1) throw ConfigError("scenario block sizes must be >= 1");

  Rng rng(scenario.seed);
  const std::size_t r = scenario.rho_true.cols();
  const int n = scenario.n();
  Matrix values(n, r);
  std::vector<int> labels;
  labels.reserve(n);

  std::size_t row = 0;
  for (std::size_t l = 0; l < scenario.sizes.size(); ++l) {
    for (int s = 0; s < scenario.sizes[l]; ++s, ++row) {
      const std::vector<double> p = sample_dirichlet(scenario.rho_true.row(l), rng);
      for (std::size_t i = 0; i < r; ++i) values(row, i) = p[i];
      labels.push_back(static_cast<int>(l));
    }
  }
  ValidationPolicy policy;
  policy.renormalize = true;
  return {validate_dataset(values, policy), std::move(labels)};
}

std::vector<int> even_sizes(int n, int k) {
  std::vector<int> sizes(k, n / k);
  const int rem = n % k;
  for (int i = 0; i < rem; ++i) ++sizes[k - 1 - i];
  return sizes;
}

namespace {

Scenario make_scenario(std::string label, std::vector<std::vector<double>> rho, int n,
                       std::vector<HellingerAnnotation> hellinger) {
  Scenario s;
  s.rho_true = Matrix::from_rows(rho);
  s.sizes = even_sizes(n, static_cast<int>(rho.size()));
  s.label = std::move(label);
  s.hellinger = std::move(hellinger);
  return s;
}

struct Family {
  std::string name;
  std::vector<std::vector<double>> rho;
  std::vector<HellingerAnnotation> hellinger;
};

const std::vector<Family>& families() {
  static const std::vector<Family> fams = {
      {"high2", {{15, 15, 1, 1}, {2, 2, 15, 20}}, {{0, 1, 1.0}}},
      {"moderate2", {{10, 9, 3, 2}, {10, 8, 5, 7}}, {{0, 1, 0.75}}},
      {"low2", {{9, 8, 4, 5}, {13, 12, 6, 12}}, {{0, 1, 0.45}}},
      {"high3",
       {{10, 10, 10, 10}, {1, 2, 15, 18}, {10, 12, 1, 0.5}},
       {{0, 1, 1.0}, {0, 2, 1.0}, {1, 2, 1.0}}},
      {"moderate3",
       {{1, 5, 1, 15}, {13, 7, 0.5, 4}, {9, 8, 1, 1}},
       {{0, 1, 1.0}, {0, 2, 1.0}, {1, 2, 0.72}}},
      // The 0.69/0.56 annotations attach to pairs (1,3) and (2,3) in this
      // order; the closed-form Bhattacharyya integral confirms it.
      {"low3",
       {{6, 9, 1, 1}, {8, 8, 3, 3}, {7, 7, 4, 1}},
       {{0, 1, 0.68}, {0, 2, 0.69}, {1, 2, 0.56}}},
  };
  return fams;
}

}  // namespace

std::vector<Scenario> scenario_library() {
  std::vector<Scenario> out;
  for (const Family& f : families())
    for (int n : {30, 50})
      out.push_back(make_scenario(f.name + "_n" + std::to_string(n), f.rho, n, f.hellinger));
  return out;
}

Scenario find_scenario(const std::string& label) {
  for (const Scenario& s : scenario_library())
    if (s.label == label) return s;
  for (const Family& f : families())
    if (f.name == label) return make_scenario(f.name + "_n50", f.rho, 50, f.hellinger);
  throw UnknownScenario("unknown scenario '" + label + "'");
}

ConfusionResult confusion_matrix(const std::vector<int>& truth, const std::vector<int>& estimate) {
  if (truth.size() != estimate.size()) throw LengthMismatch("labelings differ in length");
  if (truth.empty()) throw LengthMismatch("labelings are empty");

  int k_true = 0, k_est = 0;
  for (int v : truth) k_true = std::max(k_true, v + 1);
  for (int v : estimate) k_est = std::max(k_est, v + 1);
  const int k = std::max(k_true, k_est);
  const double n = static_cast<double>(truth.size());

  ConfusionResult result;
  result.counts = Matrix(k_true, k_est, 0.0);
  for (std::size_t j = 0; j < truth.size(); ++j) result.counts(truth[j], estimate[j]) += 1.0;

  // Permutation-maximized accuracy: pad to square and solve the assignment
  // that maximizes the matched diagonal.
  Matrix cost(k, k, 0.0);
  for (int a = 0; a < k_true; ++a)
    for (int b = 0; b < k_est; ++b) cost(a, b) = -result.counts(a, b);
  const std::vector<int> perm = assignment_min_cost(cost);
  double matched = 0.0;
  for (int a = 0; a < k; ++a) matched -= cost(a, perm[a]);
  result.accuracy = matched / n;

  // Adjusted Rand index by pair counting.
  auto choose2 = [](double x) { return x * (x - 1.0) / 2.0; };
  std::vector<double> row_sums(k_true, 0.0), col_sums(k_est, 0.0);
  double pairs_both = 0.0;
  for (int a = 0; a < k_true; ++a)
    for (int b = 0; b < k_est; ++b) {
      const double c = result.counts(a, b);
      row_sums[a] += c;
      col_sums[b] += c;
      pairs_both += choose2(c);
    }
  double pairs_true = 0.0, pairs_est = 0.0;
  for (double v : row_sums) pairs_true += choose2(v);
  for (double v : col_sums) pairs_est += choose2(v);
  const double total_pairs = choose2(n);
  const double expected = total_pairs == 0.0 ? 0.0 : pairs_true * pairs_est / total_pairs;
  const double maximum = 0.5 * (pairs_true + pairs_est);
  const double denom = maximum - expected;
  result.ari = denom == 0.0 ? (pairs_both == expected ? 1.0 : 0.0)
                            : (pairs_both - expected) / denom;
  return result;
}

}  // namespace dirmix
