#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dirmix/rng.hpp"

namespace dirmix {

/// log density of Dirichlet(rho) at an interior simplex point p.
double dirichlet_logpdf(std::span<const double> p, std::span<const double> rho);

/// As above with log(p) precomputed; skips input validation (sampler hot path).
double dirichlet_logpdf_from_logs(std::span<const double> log_p, std::span<const double> rho);

/// Differential entropy of Dirichlet(rho):
///   log B(rho) + (rho0 - r) psi(rho0) - sum_i (rho_i - 1) psi(rho_i),
/// with rho0 = sum_i rho_i. May be negative.
double dirichlet_entropy(std::span<const double> rho);

/// Hellinger distance between Dirichlet(rho_f) and Dirichlet(rho_g),
/// estimated by Monte Carlo with m draws from g:
///   H^2 = 1 - (1/m) sum_i sqrt(f(x_i)/g(x_i)),  H = sqrt(max(H^2, 0)).
/// Deterministic for a fixed seed; result in [0, 1].
double hellinger_mc(std::span<const double> rho_f, std::span<const double> rho_g,
                    std::size_t m, std::uint64_t seed);

/// One draw from Dirichlet(rho); interior point summing to 1.
std::vector<double> sample_dirichlet(std::span<const double> rho, Rng& rng);

}  // namespace dirmix
