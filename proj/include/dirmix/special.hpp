#pragma once

#include <span>

namespace dirmix {

/// log Gamma(x), x > 0.
double log_gamma(double x);

/// Digamma function psi(x), x > 0. Accurate to ~1e-13 relative.
double digamma(double x);

/// log of the multivariate beta function: sum_i lgamma(rho_i) - lgamma(sum_i rho_i).
double log_beta(std::span<const double> rho);

/// Numerically stable log(sum_i exp(v_i)).
double log_sum_exp(std::span<const double> v);

}  // namespace dirmix
