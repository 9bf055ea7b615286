#include "dirmix/dataset.hpp"

#include <cmath>

#include "dirmix/errors.hpp"

namespace dirmix {

CompositionDataset validate_dataset(const Matrix& raw, const ValidationPolicy& policy,
                                    std::vector<std::string> ids) {
  const std::size_t n = raw.rows();
  const std::size_t r = raw.cols();
  if (n < 1) throw DomainError("dataset needs at least one observation");
  if (r < 2) throw DomainError("dataset needs at least two parts");
  if (!ids.empty() && ids.size() != n)
    throw LengthMismatch("id list length does not match observation count");

  Matrix values = raw;
  for (std::size_t j = 0; j < n; ++j) {
    auto row = values.row(j);
    double raw_sum = 0.0;
    for (std::size_t i = 0; i < r; ++i) {
      const double v = row[i];
      if (!std::isfinite(v)) throw DomainError("non-finite entry at row " + std::to_string(j + 1));
      if (v < 0.0) throw NonPositiveEntry(j, i, v);
      raw_sum += v;
    }
    // Row-sum gate applies to the row as given, before any repair.
    if (!policy.renormalize && std::abs(raw_sum - 1.0) > policy.row_sum_tol)
      throw RowSumViolation(j, raw_sum);
    double sum = raw_sum;
    for (std::size_t i = 0; i < r; ++i) {
      if (row[i] == 0.0) {
        if (policy.zeros == ZeroPolicy::reject) throw NonPositiveEntry(j, i, 0.0);
        row[i] = policy.epsilon;
        sum += policy.epsilon;
      }
    }
    for (double& v : row) v /= sum;
  }
  return CompositionDataset(std::move(values), std::move(ids));
}

}  // namespace dirmix
