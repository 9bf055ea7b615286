#include "dirmix/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dirmix/errors.hpp"

namespace dirmix {

double bgr_statistic(const std::vector<std::vector<double>>& chains) {
  const std::size_t m = chains.size();
  if (m < 2) throw InsufficientChains("BGR needs at least two chains");
  const std::size_t len = chains.front().size();
  if (len < 2) throw InsufficientChains("BGR needs chains of length >= 2");
  for (const auto& c : chains)
    if (c.size() != len) throw LengthMismatch("chains differ in length");

  const double t = static_cast<double>(len);
  std::vector<double> means(m);
  double w = 0.0;
  for (std::size_t c = 0; c < m; ++c) {
    double mean = 0.0;
    for (double x : chains[c]) mean += x;
    mean /= t;
    means[c] = mean;
    double ss = 0.0;
    for (double x : chains[c]) ss += (x - mean) * (x - mean);
    w += ss / (t - 1.0);
  }
  w /= static_cast<double>(m);

  double grand = 0.0;
  for (double mu : means) grand += mu;
  grand /= static_cast<double>(m);
  double b = 0.0;
  for (double mu : means) b += (mu - grand) * (mu - grand);
  b *= t / (static_cast<double>(m) - 1.0);

  if (w == 0.0) return b == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
  const double var_plus = (t - 1.0) / t * w + b / t;
  return std::sqrt(var_plus / w);
}

double BgrReport::max_rho() const {
  double mx = 0.0;
  for (double v : rho.data()) mx = std::max(mx, v);
  return mx;
}

BgrReport compute_bgr(const std::vector<Trace>& traces) {
  if (traces.size() < 2) throw InsufficientChains("BGR needs at least two chains");
  for (const Trace& t : traces)
    if (t.size() != traces.front().size()) throw LengthMismatch("traces differ in stored length");
  if (traces.front().size() == 0) throw EmptyTrace("no stored draws");

  const int k = traces.front().k;
  const std::size_t r = traces.front().r;
  const std::size_t len = traces.front().size();
  const std::size_t m = traces.size();

  auto collect = [&](auto&& getter) {
    std::vector<std::vector<double>> chains(m, std::vector<double>(len));
    for (std::size_t c = 0; c < m; ++c)
      for (std::size_t t = 0; t < len; ++t) chains[c][t] = getter(traces[c].draws[t]);
    return bgr_statistic(chains);
  };

  BgrReport report;
  report.alpha = collect([](const ChainState& s) { return s.alpha; });
  report.beta = collect([](const ChainState& s) { return s.beta; });
  report.rho = Matrix(k, r);
  for (int l = 0; l < k; ++l)
    for (std::size_t i = 0; i < r; ++i)
      report.rho(l, i) = collect([l, i](const ChainState& s) { return s.rho(l, i); });
  return report;
}

}  // namespace dirmix
