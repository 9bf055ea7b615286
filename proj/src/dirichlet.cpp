#include "dirmix/dirichlet.hpp"

#include <cmath>
#include <limits>

#include "dirmix/errors.hpp"
#include "dirmix/special.hpp"

namespace dirmix {

namespace {

void check_rho(std::span<const double> rho) {
  if (rho.empty()) throw DomainError("empty parameter vector");
  for (double r : rho)
    if (!(r > 0.0) || !std::isfinite(r)) throw DomainError("Dirichlet parameters must be positive and finite");
}

}  // namespace

double dirichlet_logpdf(std::span<const double> p, std::span<const double> rho) {
  check_rho(rho);
  if (p.size() != rho.size()) throw DomainError("dimension mismatch between point and parameters");
  double psum = 0.0;
  for (double v : p) {
    if (!(v > 0.0) || v >= 1.0) throw DomainError("point must be interior to the simplex");
    psum += v;
  }
  if (std::abs(psum - 1.0) > 1e-8) throw DomainError("point does not sum to 1");

  double rho0 = 0.0, lg = 0.0, dot = 0.0;
  for (std::size_t i = 0; i < rho.size(); ++i) {
    rho0 += rho[i];
    lg += std::lgamma(rho[i]);
    dot += (rho[i] - 1.0) * std::log(p[i]);
  }
  return std::lgamma(rho0) - lg + dot;
}

double dirichlet_logpdf_from_logs(std::span<const double> log_p, std::span<const double> rho) {
  double rho0 = 0.0, lg = 0.0, dot = 0.0;
  for (std::size_t i = 0; i < rho.size(); ++i) {
    rho0 += rho[i];
    lg += std::lgamma(rho[i]);
    dot += (rho[i] - 1.0) * log_p[i];
  }
  return std::lgamma(rho0) - lg + dot;
}

double dirichlet_entropy(std::span<const double> rho) {
  check_rho(rho);
  const double r = static_cast<double>(rho.size());
  double rho0 = 0.0;
  for (double v : rho) rho0 += v;
  double h = log_beta(rho) + (rho0 - r) * digamma(rho0);
  for (double v : rho) h -= (v - 1.0) * digamma(v);
  return h;
}

double hellinger_mc(std::span<const double> rho_f, std::span<const double> rho_g,
                    std::size_t m, std::uint64_t seed) {
  check_rho(rho_f);
  check_rho(rho_g);
  if (rho_f.size() != rho_g.size()) throw DomainError("parameter vectors differ in length");
  if (m < 1) throw DomainError("hellinger_mc requires m >= 1");

  Rng rng(seed);
  double acc = 0.0;
  std::vector<double> logs(rho_g.size());
  for (std::size_t s = 0; s < m; ++s) {
    const std::vector<double> x = sample_dirichlet(rho_g, rng);
    for (std::size_t i = 0; i < x.size(); ++i) logs[i] = std::log(x[i]);
    const double lf = dirichlet_logpdf_from_logs(logs, rho_f);
    const double lg = dirichlet_logpdf_from_logs(logs, rho_g);
    acc += std::exp(0.5 * (lf - lg));
  }
  const double h2 = 1.0 - acc / static_cast<double>(m);
  return std::sqrt(std::max(h2, 0.0));
}

std::vector<double> sample_dirichlet(std::span<const double> rho, Rng& rng) {
  check_rho(rho);
  std::vector<double> x(rho.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < rho.size(); ++i) {
    double g = draw_gamma(rng, rho[i], 1.0);
    if (g < std::numeric_limits<double>::min()) g = std::numeric_limits<double>::min();
    x[i] = g;
    sum += g;
  }
  for (double& v : x) v /= sum;
  return x;
}

}  // namespace dirmix
