#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dirmix {

/// Parameter or data value outside the mathematical domain of an operation.
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

/// Zero or negative entry found while validating compositional data.
struct NonPositiveEntry : DomainError {
  NonPositiveEntry(std::size_t row, std::size_t col, double value)
      : DomainError("non-positive entry " + std::to_string(value) + " at row " +
                    std::to_string(row + 1) + ", column " + std::to_string(col + 1)),
        row(row), col(col), value(value) {}
  std::size_t row;
  std::size_t col;
  double value;
};

/// Row of a composition deviates from unit sum beyond tolerance.
struct RowSumViolation : DomainError {
  RowSumViolation(std::size_t row, double sum)
      : DomainError("row " + std::to_string(row + 1) + " sums to " +
                    std::to_string(sum) + ", expected 1"),
        row(row), sum(sum) {}
  std::size_t row;
  double sum;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct LengthMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct EmptyTrace : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InsufficientChains : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct MissingClassProbs : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UnknownScenario : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// File parse or write failure; carries enough context for CLI diagnostics.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace dirmix
