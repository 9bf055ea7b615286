#pragma once

#include <string>
#include <vector>

#include "dirmix/matrix.hpp"

namespace dirmix {

enum class ZeroPolicy { reject, epsilon };

/// How raw proportions are admitted onto the open simplex.
/// Zeros are an error under `reject`; under `epsilon` they are replaced by
/// `epsilon` and the row renormalized. Rows whose sum deviates from 1 by
/// more than `row_sum_tol` are an error unless `renormalize` is set.
struct ValidationPolicy {
  ZeroPolicy zeros = ZeroPolicy::reject;
  double epsilon = 1e-6;
  bool renormalize = false;
  double row_sum_tol = 1e-6;
};

/// n observations on the open r-simplex: every entry strictly positive,
/// every row summing to 1.
class CompositionDataset {
public:
  std::size_t n() const { return values_.rows(); }
  std::size_t parts() const { return values_.cols(); }
  const Matrix& values() const { return values_; }
  std::span<const double> row(std::size_t j) const { return values_.row(j); }
  const std::vector<std::string>& ids() const { return ids_; }

  friend CompositionDataset validate_dataset(const Matrix&, const ValidationPolicy&,
                                             std::vector<std::string>);

private:
  CompositionDataset(Matrix values, std::vector<std::string> ids)
      : values_(std::move(values)), ids_(std::move(ids)) {}
  Matrix values_;
  std::vector<std::string> ids_;
};

/// Validates a raw n x r matrix of proportions against the simplex
/// constraints and returns the admitted dataset. Throws NonPositiveEntry,
/// RowSumViolation or DomainError with row/column context.
CompositionDataset validate_dataset(const Matrix& raw, const ValidationPolicy& policy = {},
                                    std::vector<std::string> ids = {});

}  // namespace dirmix
