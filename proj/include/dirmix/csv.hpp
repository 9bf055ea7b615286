#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "dirmix/criteria.hpp"
#include "dirmix/dataset.hpp"
#include "dirmix/matrix.hpp"
#include "dirmix/model.hpp"

namespace dirmix {

/// 17 significant digits: lossless for 64-bit floats.
std::string format_double(double v);
double parse_double(const std::string& token, const std::string& context);

struct DatasetCsv {
  CompositionDataset data;
  std::vector<std::string> part_names;
  bool has_ids = false;
};

/// Comma-separated values with a required header row. A leading `id`
/// column (header literally "id", case-insensitive) carries labels; all
/// other columns are numeric parts.
DatasetCsv read_dataset_csv(const std::filesystem::path& path, const ValidationPolicy& policy);

void write_dataset_csv(const std::filesystem::path& path, const Matrix& values,
                       const std::vector<std::string>& part_names,
                       const std::vector<std::string>& ids);

/// Ground-truth labels: header "id,cluster", 1-based cluster numbers.
void write_labels_csv(const std::filesystem::path& path, const std::vector<int>& labels,
                      const std::vector<std::string>& ids);
std::vector<int> read_labels_csv(const std::filesystem::path& path);

/// One CSV per chain: iteration, alpha, beta, rho_l_i (row-major),
/// z_1..z_n (1-based), log_post.
void write_trace_csv(const std::filesystem::path& path, const Trace& trace);
Trace read_trace_csv(const std::filesystem::path& path);

/// Companion classification probabilities: draw, obs, m_1..m_k.
void write_class_probs_csv(const std::filesystem::path& path, const Trace& trace);
void read_class_probs_csv(const std::filesystem::path& path, Trace& trace);

/// Selection table: k, icl, bic, dic5, lambda_k, map_logpost plus 0/1
/// marker columns for the per-criterion recommendation.
void write_selection_csv(const std::filesystem::path& path,
                         const std::vector<CriterionReport>& reports);

/// Headerless numeric matrix (used for --rho-file).
Matrix read_matrix_csv(const std::filesystem::path& path);

}  // namespace dirmix
