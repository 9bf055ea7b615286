#include "dirmix/special.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dirmix/errors.hpp"

namespace dirmix {

double log_gamma(double x) {
  if (!(x > 0.0)) throw DomainError("log_gamma requires x > 0");
  return std::lgamma(x);
}

double digamma(double x) {
  if (!(x > 0.0)) throw DomainError("digamma requires x > 0");
  // Shift into the asymptotic regime, then apply the series in 1/x^2.
  double result = 0.0;
  while (x < 6.0) {
    result -= 1.0 / x;
    x += 1.0;
  }
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  // psi(x) ~ ln x - 1/(2x) - sum B_{2n} / (2n x^{2n})
  double series = inv2 * (1.0 / 12.0 -
                  inv2 * (1.0 / 120.0 -
                  inv2 * (1.0 / 252.0 -
                  inv2 * (1.0 / 240.0 -
                  inv2 * (1.0 / 132.0 -
                  inv2 * (691.0 / 32760.0 -
                  inv2 * (1.0 / 12.0)))))));
  return result + std::log(x) - 0.5 * inv - series;
}

double log_beta(std::span<const double> rho) {
  double sum = 0.0;
  double lg = 0.0;
  for (double r : rho) {
    if (!(r > 0.0) || !std::isfinite(r)) throw DomainError("log_beta requires positive parameters");
    sum += r;
    lg += std::lgamma(r);
  }
  return lg - std::lgamma(sum);
}

double log_sum_exp(std::span<const double> v) {
  if (v.empty()) return -std::numeric_limits<double>::infinity();
  const double mx = *std::max_element(v.begin(), v.end());
  if (!std::isfinite(mx)) return mx;
  double acc = 0.0;
  for (double x : v) acc += std::exp(x - mx);
  return mx + std::log(acc);
}

}  // namespace dirmix
