#include "dirmix/fit.hpp"

#include "dirmix/errors.hpp"
#include "dirmix/sampler.hpp"

namespace dirmix {

FitResult postprocess_traces(std::vector<Trace> traces, const CompositionDataset& data,
                             const Hyperparams& hyper, int relabel_max_iter) {
  FitResult result;
  result.traces = std::move(traces);
  result.relabel = stephens_relabel(result.traces, relabel_max_iter);
  result.map = map_estimate(result.traces);
  result.summaries = summarize_parameters(result.traces);
  result.entropy = entropy_distribution(result.traces);
  result.coalloc = coallocation_matrix(result.traces);
  result.criteria = criterion_report(result.traces, data, hyper);
  if (result.traces.size() >= 2) result.bgr = compute_bgr(result.traces);
  for (const Trace& t : result.traces) result.chain_seeds.push_back(t.seed);
  return result;
}

FitResult fit_model(const CompositionDataset& data, const FitOptions& options) {
  options.base.check();
  if (options.chains < 1) throw ConfigError("chain count must be >= 1");
  if (options.base.stored_draws() < 1)
    throw ConfigError("schedule stores no draws: increase iterations or reduce thin");
  std::vector<Trace> traces =
      run_chains(data, options.base, options.chains, options.master_seed);
  return postprocess_traces(std::move(traces), data, options.base.hyper,
                            options.relabel_max_iter);
}

std::vector<CriterionReport> scan_k(const CompositionDataset& data, const FitOptions& base,
                                    int k_min, int k_max) {
  if (k_min < 1 || k_min > k_max) throw ConfigError("need 1 <= k_min <= k_max");
  std::vector<CriterionReport> reports;
  for (int k = k_min; k <= k_max; ++k) {
    FitOptions options = base;
    options.base.k = k;
    options.master_seed = derive_seed(base.master_seed, 1000 + static_cast<std::uint64_t>(k));
    try {
      reports.push_back(fit_model(data, options).criteria);
    } catch (const std::exception& e) {
      throw ConfigError("fit failed for k=" + std::to_string(k) + ": " + e.what());
    }
  }
  return reports;
}

}  // namespace dirmix
