#pragma once

#include <vector>

#include "dirmix/dataset.hpp"
#include "dirmix/model.hpp"

namespace dirmix {

struct CriterionReport {
  int k = 0;
  double icl = 0.0;
  double bic = 0.0;
  double dic5 = 0.0;
  int lambda_k = 0;       // k * r free concentration parameters
  double map_logpost = 0.0;
};

/// Approximate integrated completed likelihood at the joint MAP draw:
///   log f(p | z~, rho~) - (k r / 2) log n + log f(z~ | delta).
/// Larger is better.
double icl(const std::vector<Trace>& traces, const CompositionDataset& data,
           const Hyperparams& hyper);

/// Conditional-likelihood deviance criterion:
///   -4 E[log f(p, z | rho)] + 2 log f(p, z~ | rho~),
/// with the joint term log f(p | z, rho) + log pi(z | delta) averaged over
/// stored draws. Smaller is better.
double dic5(const std::vector<Trace>& traces, const CompositionDataset& data,
            const Hyperparams& hyper);

/// BIC with plug-in mixture likelihood at the MAP concentrations and
/// collapsed-posterior weights (n_l + delta)/(n + k delta);
/// parameter count nu = k r + (k - 1). Smaller is better.
double bic(const std::vector<Trace>& traces, const CompositionDataset& data,
           const Hyperparams& hyper);

/// All three criteria from one pass over the traces.
CriterionReport criterion_report(const std::vector<Trace>& traces, const CompositionDataset& data,
                                 const Hyperparams& hyper);

}  // namespace dirmix
