#include <doctest.h>

#include "dirmix/dataset.hpp"
#include "dirmix/errors.hpp"

using namespace dirmix;

TEST_CASE("symmetric point is accepted") {
  const Matrix raw = Matrix::from_rows({{0.25, 0.25, 0.25, 0.25}});
  const CompositionDataset data = validate_dataset(raw);
  CHECK(data.n() == 1);
  CHECK(data.parts() == 4);
  CHECK(data.row(0)[0] == doctest::Approx(0.25));
}

TEST_CASE("boundary point is rejected under the reject policy") {
  const Matrix raw = Matrix::from_rows({{0.5, 0.5, 0.0, 0.0}});
  CHECK_THROWS_AS(validate_dataset(raw), NonPositiveEntry);
  try {
    validate_dataset(raw);
  } catch (const NonPositiveEntry& e) {
    CHECK(e.row == 0);
    CHECK(e.col == 2);
  }
}

TEST_CASE("reported mean-abundance profile is a valid composition") {
  const Matrix raw = Matrix::from_rows({{0.43, 0.43, 0.03, 0.11}});
  const CompositionDataset data = validate_dataset(raw);
  CHECK(data.n() == 1);
  double sum = 0.0;
  for (double v : data.row(0)) sum += v;
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("epsilon policy repairs zeros and renormalizes") {
  const Matrix raw = Matrix::from_rows({{0.5, 0.5, 0.0, 0.0}});
  ValidationPolicy policy;
  policy.zeros = ZeroPolicy::epsilon;
  policy.epsilon = 1e-6;
  const CompositionDataset data = validate_dataset(raw, policy);
  CHECK(data.row(0)[2] > 0.0);
  CHECK(data.row(0)[2] == doctest::Approx(1e-6).epsilon(1e-3));
  double sum = 0.0;
  for (double v : data.row(0)) sum += v;
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("row-sum gate fires without renormalize and passes with it") {
  const Matrix raw = Matrix::from_rows({{0.5, 0.3, 0.3}});
  CHECK_THROWS_AS(validate_dataset(raw), RowSumViolation);
  ValidationPolicy policy;
  policy.renormalize = true;
  const CompositionDataset data = validate_dataset(raw, policy);
  double sum = 0.0;
  for (double v : data.row(0)) sum += v;
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("small deviations are renormalized to machine precision") {
  const Matrix raw = Matrix::from_rows({{0.25000001, 0.25, 0.25, 0.25}});
  const CompositionDataset data = validate_dataset(raw);
  double sum = 0.0;
  for (double v : data.row(0)) sum += v;
  CHECK(std::abs(sum - 1.0) <= 1e-8);
}

TEST_CASE("dimension preconditions") {
  CHECK_THROWS_AS(validate_dataset(Matrix(0, 4)), DomainError);
  CHECK_THROWS_AS(validate_dataset(Matrix::from_rows({{1.0}})), DomainError);
}

TEST_CASE("negative entries are rejected under every policy") {
  const Matrix raw = Matrix::from_rows({{1.2, -0.2, 0.0}});
  ValidationPolicy policy;
  policy.zeros = ZeroPolicy::epsilon;
  policy.renormalize = true;
  CHECK_THROWS_AS(validate_dataset(raw, policy), NonPositiveEntry);
}
