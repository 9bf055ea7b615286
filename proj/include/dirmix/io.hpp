#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "dirmix/dataset.hpp"
#include "dirmix/fit.hpp"
#include "dirmix/synth.hpp"

namespace dirmix {

/// Everything needed to reproduce a run bit for bit.
struct RunManifest {
  std::string version;
  std::string command;
  std::string created_utc;
  std::string written_utc;
  std::string input;
  int chains = 5;
  SamplerConfig config;
  ValidationPolicy policy;
  std::uint64_t master_seed = 0;
  std::vector<std::uint64_t> chain_seeds;
  int k_min = 0;  // select only
  int k_max = 0;
};

/// Optional recovery block for fits given ground-truth labels.
struct PartitionRecovery {
  ConfusionResult confusion;
};

void write_manifest(const std::filesystem::path& path, const RunManifest& manifest);
RunManifest read_manifest(const std::filesystem::path& path);

/// Structured summary document with sections parameters,
/// normalized_parameters, entropy, coallocation, criteria, diagnostics.
/// Pure function of the fit result: reruns over the same traces emit
/// byte-identical documents.
std::string summary_document(const FitResult& fit,
                             const std::optional<PartitionRecovery>& recovery);
void write_summary(const std::filesystem::path& path, const FitResult& fit,
                   const std::optional<PartitionRecovery>& recovery);

/// Acceptance bookkeeping per chain (proposals/accepts per block).
void write_accept_stats(const std::filesystem::path& path, const std::vector<Trace>& traces);
std::vector<AcceptStats> read_accept_stats(const std::filesystem::path& path);

/// Diagnostics report: BGR per parameter plus acceptance-rate warnings
/// (rho entries outside [0.10, 0.80], BGR above 1.1).
std::string diagnostics_document(const std::optional<BgrReport>& bgr,
                                 const std::vector<AcceptStats>& accept,
                                 std::vector<std::string>& warnings);

/// Output-directory layout shared by `fit` and the re-analysis commands.
struct OutputLayout {
  std::filesystem::path dir;
  std::filesystem::path chain_csv(int chain) const;
  std::filesystem::path class_probs_csv(int chain) const;
  std::filesystem::path summary_json() const { return dir / "summary.json"; }
  std::filesystem::path manifest_json() const { return dir / "manifest.json"; }
  std::filesystem::path accept_stats_json() const { return dir / "accept_stats.json"; }
  std::filesystem::path selection_csv() const { return dir / "selection.csv"; }
  std::filesystem::path diagnostics_json() const { return dir / "diagnostics.json"; }
};

}  // namespace dirmix
