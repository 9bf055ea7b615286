#pragma once

#include <optional>
#include <vector>

#include "dirmix/criteria.hpp"
#include "dirmix/dataset.hpp"
#include "dirmix/diagnostics.hpp"
#include "dirmix/model.hpp"
#include "dirmix/relabel.hpp"
#include "dirmix/summarize.hpp"

namespace dirmix {

struct FitOptions {
  SamplerConfig base;
  int chains = 5;
  std::uint64_t master_seed = 0;
  int relabel_max_iter = 100;
};

/// Everything a finished fit reports: relabeled chains, the MAP pair,
/// parameter and entropy summaries, the co-allocation matrix, criteria,
/// and convergence diagnostics (absent with a single chain).
struct FitResult {
  std::vector<Trace> traces;  // relabeled
  RelabelResult relabel;
  MapEstimate map;
  ParameterSummaries summaries;
  std::vector<EntropyQuantiles> entropy;
  Matrix coalloc;
  CriterionReport criteria;
  std::optional<BgrReport> bgr;
  std::vector<std::uint64_t> chain_seeds;
};

/// Runs chains concurrently, resolves label switching, and computes all
/// posterior summaries and selection criteria.
FitResult fit_model(const CompositionDataset& data, const FitOptions& options);

/// Same post-processing pipeline applied to already-run chains
/// (the post-hoc path used when re-analyzing stored traces).
FitResult postprocess_traces(std::vector<Trace> traces, const CompositionDataset& data,
                             const Hyperparams& hyper, int relabel_max_iter = 100);

/// Independent fits for each k in [k_min, k_max]; per-k seeds derive from
/// the master seed, so scans are reproducible.
std::vector<CriterionReport> scan_k(const CompositionDataset& data, const FitOptions& base,
                                    int k_min, int k_max);

}  // namespace dirmix
