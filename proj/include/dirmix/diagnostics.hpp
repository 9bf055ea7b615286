#pragma once

#include <string>
#include <vector>

#include "dirmix/model.hpp"

namespace dirmix {

/// Potential scale reduction factor over >= 2 equal-length scalar chains:
/// sqrt(((T-1)/T W + B/T) / W) with W the mean within-chain variance and
/// B = T var(chain means). Zero-variance degenerate input yields 1.
double bgr_statistic(const std::vector<std::vector<double>>& chains);

struct BgrReport {
  double alpha = 0.0;
  double beta = 0.0;
  Matrix rho;  // k x r
  double max_rho() const;
};

/// BGR per scalar parameter (alpha, beta, every rho entry) across chains.
/// Chains are expected to be relabeled first.
BgrReport compute_bgr(const std::vector<Trace>& traces);

}  // namespace dirmix
