#pragma once

#include <optional>
#include <vector>

#include "dirmix/dataset.hpp"
#include "dirmix/diagnostics.hpp"
#include "dirmix/model.hpp"

namespace dirmix {

/// Empirical quantile with linear interpolation between order statistics
/// (R type 7). q in [0, 1]. Input need not be sorted.
double quantile(std::vector<double> values, double q);

struct ParamSummary {
  double lower = 0.0;   // 2.5%
  double median = 0.0;
  double upper = 0.0;   // 97.5%
};

struct EntropyQuantiles {
  double q5 = 0.0;
  double q50 = 0.0;
  double q95 = 0.0;
};

struct MapEstimate {
  ChainState state;
  double log_post = 0.0;
  std::size_t chain = 0;  // chain and within-chain draw of the argmax
  std::size_t draw = 0;
  long iteration = 0;
};

/// Stored draw maximizing the unnormalized log posterior; earliest wins ties.
MapEstimate map_estimate(const std::vector<Trace>& traces);

/// n x n matrix of the fractions of stored draws allocating each pair to
/// the same cluster. Symmetric with unit diagonal.
Matrix coallocation_matrix(const std::vector<Trace>& traces);

/// Per-entry 2.5/50/97.5 percentiles of rho and of rho normalized by its
/// row sum, pooled over chains.
struct ParameterSummaries {
  std::vector<std::vector<ParamSummary>> rho;         // k x r
  std::vector<std::vector<ParamSummary>> normalized;  // k x r
};
ParameterSummaries summarize_parameters(const std::vector<Trace>& traces);

/// Per-cluster 5/50/95 percentiles of the Dirichlet entropy across draws.
std::vector<EntropyQuantiles> entropy_distribution(const std::vector<Trace>& traces);

}  // namespace dirmix
