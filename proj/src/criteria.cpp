#include "dirmix/criteria.hpp"

#include <cmath>

#include "dirmix/dirichlet.hpp"
#include "dirmix/errors.hpp"
#include "dirmix/sampler.hpp"
#include "dirmix/special.hpp"
#include "dirmix/summarize.hpp"

namespace dirmix {

namespace {

Matrix log_values(const CompositionDataset& data) {
  Matrix logs(data.n(), data.parts());
  for (std::size_t j = 0; j < data.n(); ++j) {
    const auto row = data.row(j);
    for (std::size_t i = 0; i < row.size(); ++i) logs(j, i) = std::log(row[i]);
  }
  return logs;
}

double data_loglik(const ChainState& draw, const Matrix& logs) {
  double acc = 0.0;
  for (std::size_t j = 0; j < logs.rows(); ++j)
    acc += dirichlet_logpdf_from_logs(logs.row(j), draw.rho.row(draw.z[j]));
  return acc;
}

struct MapTerms {
  ChainState state;
  double loglik = 0.0;
  double log_pi_z = 0.0;
  double log_post = 0.0;
};

MapTerms map_terms(const std::vector<Trace>& traces, const CompositionDataset& data,
                   const Hyperparams& hyper, const Matrix& logs) {
  const MapEstimate map = map_estimate(traces);
  MapTerms terms;
  terms.state = map.state;
  terms.log_post = map.log_post;
  terms.loglik = data_loglik(map.state, logs);
  terms.log_pi_z = log_allocation_prior(map.state.z, traces.front().k, hyper.delta);
  (void)data;
  return terms;
}

}  // namespace

double icl(const std::vector<Trace>& traces, const CompositionDataset& data,
           const Hyperparams& hyper) {
  const Matrix logs = log_values(data);
  const MapTerms map = map_terms(traces, data, hyper, logs);
  const int k = traces.front().k;
  const double lambda_k = static_cast<double>(k) * static_cast<double>(data.parts());
  return map.loglik - 0.5 * lambda_k * std::log(static_cast<double>(data.n())) + map.log_pi_z;
}

double dic5(const std::vector<Trace>& traces, const CompositionDataset& data,
            const Hyperparams& hyper) {
  const Matrix logs = log_values(data);
  const MapTerms map = map_terms(traces, data, hyper, logs);
  const int k = traces.front().k;

  double expectation = 0.0;
  std::size_t total = 0;
  for (const Trace& trace : traces) {
    for (const ChainState& draw : trace.draws) {
      expectation += data_loglik(draw, logs) + log_allocation_prior(draw.z, k, hyper.delta);
      ++total;
    }
  }
  if (total == 0) throw EmptyTrace("no stored draws");
  expectation /= static_cast<double>(total);

  return -4.0 * expectation + 2.0 * (map.loglik + map.log_pi_z);
}

double bic(const std::vector<Trace>& traces, const CompositionDataset& data,
           const Hyperparams& hyper) {
  const Matrix logs = log_values(data);
  const MapTerms map = map_terms(traces, data, hyper, logs);
  const int k = traces.front().k;
  const std::size_t n = data.n();
  const std::size_t r = data.parts();

  std::vector<long> counts(k, 0);
  for (int label : map.state.z) ++counts[label];
  std::vector<double> log_weights(k);
  for (int l = 0; l < k; ++l)
    log_weights[l] = std::log((static_cast<double>(counts[l]) + hyper.delta) /
                              (static_cast<double>(n) + k * hyper.delta));

  double loglik_mix = 0.0;
  std::vector<double> terms(k);
  for (std::size_t j = 0; j < n; ++j) {
    for (int l = 0; l < k; ++l)
      terms[l] = log_weights[l] + dirichlet_logpdf_from_logs(logs.row(j), map.state.rho.row(l));
    loglik_mix += log_sum_exp(terms);
  }

  const double nu = static_cast<double>(k) * static_cast<double>(r) + (k - 1);
  return -2.0 * loglik_mix + nu * std::log(static_cast<double>(n));
}

CriterionReport criterion_report(const std::vector<Trace>& traces, const CompositionDataset& data,
                                 const Hyperparams& hyper) {
  CriterionReport report;
  report.k = traces.front().k;
  report.lambda_k = report.k * static_cast<int>(data.parts());
  report.icl = icl(traces, data, hyper);
  report.bic = bic(traces, data, hyper);
  report.dic5 = dic5(traces, data, hyper);
  report.map_logpost = map_estimate(traces).log_post;
  return report;
}

}  // namespace dirmix
