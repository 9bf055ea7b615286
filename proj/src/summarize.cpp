#include "dirmix/summarize.hpp"

#include <algorithm>
#include <cmath>

#include "dirmix/dirichlet.hpp"
#include "dirmix/errors.hpp"

namespace dirmix {

namespace {

void require_draws(const std::vector<Trace>& traces) {
  for (const Trace& t : traces)
    if (!t.draws.empty()) return;
  throw EmptyTrace("no stored draws");
}

}  // namespace

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw EmptyTrace("quantile of empty sample");
  std::sort(values.begin(), values.end());
  const double h = q * static_cast<double>(values.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = h - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

MapEstimate map_estimate(const std::vector<Trace>& traces) {
  require_draws(traces);
  MapEstimate best;
  bool first = true;
  for (std::size_t c = 0; c < traces.size(); ++c) {
    const Trace& trace = traces[c];
    for (std::size_t t = 0; t < trace.size(); ++t) {
      if (first || trace.log_post[t] > best.log_post) {
        best.state = trace.draws[t];
        best.log_post = trace.log_post[t];
        best.chain = c;
        best.draw = t;
        best.iteration = trace.iteration.empty() ? 0 : trace.iteration[t];
        first = false;
      }
    }
  }
  return best;
}

Matrix coallocation_matrix(const std::vector<Trace>& traces) {
  require_draws(traces);
  const std::size_t n = traces.front().n;
  Matrix counts(n, n, 0.0);
  std::size_t total = 0;
  for (const Trace& trace : traces) {
    for (const ChainState& draw : trace.draws) {
      ++total;
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b)
          if (draw.z[a] == draw.z[b]) counts(a, b) += 1.0;
    }
  }
  Matrix coalloc(n, n, 0.0);
  for (std::size_t a = 0; a < n; ++a) {
    coalloc(a, a) = 1.0;
    for (std::size_t b = a + 1; b < n; ++b) {
      const double p = counts(a, b) / static_cast<double>(total);
      coalloc(a, b) = p;
      coalloc(b, a) = p;
    }
  }
  return coalloc;
}

ParameterSummaries summarize_parameters(const std::vector<Trace>& traces) {
  require_draws(traces);
  const int k = traces.front().k;
  const std::size_t r = traces.front().r;

  ParameterSummaries out;
  out.rho.assign(k, std::vector<ParamSummary>(r));
  out.normalized.assign(k, std::vector<ParamSummary>(r));

  std::vector<double> raw, norm;
  for (int l = 0; l < k; ++l) {
    for (std::size_t i = 0; i < r; ++i) {
      raw.clear();
      norm.clear();
      for (const Trace& trace : traces) {
        for (const ChainState& draw : trace.draws) {
          const auto row = draw.rho.row(l);
          double sum = 0.0;
          for (double v : row) sum += v;
          raw.push_back(row[i]);
          norm.push_back(row[i] / sum);
        }
      }
      out.rho[l][i] = {quantile(raw, 0.025), quantile(raw, 0.5), quantile(raw, 0.975)};
      out.normalized[l][i] = {quantile(norm, 0.025), quantile(norm, 0.5), quantile(norm, 0.975)};
    }
  }
  return out;
}

std::vector<EntropyQuantiles> entropy_distribution(const std::vector<Trace>& traces) {
  require_draws(traces);
  const int k = traces.front().k;
  std::vector<EntropyQuantiles> out(k);
  std::vector<double> h;
  for (int l = 0; l < k; ++l) {
    h.clear();
    for (const Trace& trace : traces)
      for (const ChainState& draw : trace.draws) h.push_back(dirichlet_entropy(draw.rho.row(l)));
    out[l] = {quantile(h, 0.05), quantile(h, 0.5), quantile(h, 0.95)};
  }
  return out;
}

}  // namespace dirmix
