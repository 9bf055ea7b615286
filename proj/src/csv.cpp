#include "dirmix/csv.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "dirmix/errors.hpp"

namespace dirmix {

namespace {

std::string trim(const std::string& s) {
  std::size_t begin = 0, end = s.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(s[begin]))) ++begin;
  while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1]))) --end;
  return s.substr(begin, end - begin);
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::vector<std::vector<std::string>> read_rows(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    rows.push_back(split_line(line));
  }
  return rows;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

bool iequals(const std::string& a, const char* b) {
  std::string lower = a;
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return lower == b;
}

long parse_long(const std::string& token, const std::string& context) {
  long value = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size())
    throw IoError("cannot parse integer '" + token + "' in " + context);
  return value;
}

}  // namespace

std::string format_double(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double parse_double(const std::string& token, const std::string& context) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size())
    throw IoError("cannot parse number '" + token + "' in " + context);
  return value;
}

DatasetCsv read_dataset_csv(const std::filesystem::path& path, const ValidationPolicy& policy) {
  const auto rows = read_rows(path);
  if (rows.size() < 2) throw IoError(path.string() + ": need a header row and at least one data row");
  const auto& header = rows.front();
  if (header.size() < 2) throw IoError(path.string() + ": need at least two columns");

  const bool has_ids = iequals(header.front(), "id");
  const std::size_t first_part = has_ids ? 1 : 0;
  if (header.size() - first_part < 2)
    throw IoError(path.string() + ": need at least two part columns");
  std::vector<std::string> part_names(header.begin() + first_part, header.end());

  const std::size_t n = rows.size() - 1;
  const std::size_t r = part_names.size();
  Matrix values(n, r);
  std::vector<std::string> ids;
  for (std::size_t j = 0; j < n; ++j) {
    const auto& row = rows[j + 1];
    if (row.size() != header.size())
      throw IoError(path.string() + ": row " + std::to_string(j + 2) + " has " +
                    std::to_string(row.size()) + " cells, expected " +
                    std::to_string(header.size()));
    if (has_ids) ids.push_back(row.front());
    for (std::size_t i = 0; i < r; ++i)
      values(j, i) = parse_double(row[first_part + i], path.string() + " row " +
                                  std::to_string(j + 2) + " column " +
                                  std::to_string(first_part + i + 1));
  }
  return {validate_dataset(values, policy, std::move(ids)), std::move(part_names), has_ids};
}

void write_dataset_csv(const std::filesystem::path& path, const Matrix& values,
                       const std::vector<std::string>& part_names,
                       const std::vector<std::string>& ids) {
  auto out = open_out(path);
  if (!ids.empty()) out << "id,";
  for (std::size_t i = 0; i < part_names.size(); ++i)
    out << part_names[i] << (i + 1 == part_names.size() ? "\n" : ",");
  for (std::size_t j = 0; j < values.rows(); ++j) {
    if (!ids.empty()) out << ids[j] << ',';
    for (std::size_t i = 0; i < values.cols(); ++i)
      out << format_double(values(j, i)) << (i + 1 == values.cols() ? "\n" : ",");
  }
}

void write_labels_csv(const std::filesystem::path& path, const std::vector<int>& labels,
                      const std::vector<std::string>& ids) {
  auto out = open_out(path);
  out << "id,cluster\n";
  for (std::size_t j = 0; j < labels.size(); ++j) {
    out << (ids.empty() ? std::to_string(j + 1) : ids[j]) << ',' << labels[j] + 1 << '\n';
  }
}

std::vector<int> read_labels_csv(const std::filesystem::path& path) {
  const auto rows = read_rows(path);
  if (rows.size() < 2) throw IoError(path.string() + ": need a header row and labels");
  std::vector<int> labels;
  for (std::size_t j = 1; j < rows.size(); ++j) {
    if (rows[j].size() < 2) throw IoError(path.string() + ": row " + std::to_string(j + 1));
    labels.push_back(static_cast<int>(parse_long(rows[j].back(), path.string())) - 1);
  }
  return labels;
}

void write_trace_csv(const std::filesystem::path& path, const Trace& trace) {
  auto out = open_out(path);
  out << "iteration,alpha,beta";
  for (int l = 0; l < trace.k; ++l)
    for (std::size_t i = 0; i < trace.r; ++i) out << ",rho_" << l + 1 << '_' << i + 1;
  for (std::size_t j = 0; j < trace.n; ++j) out << ",z_" << j + 1;
  out << ",log_post\n";
  for (std::size_t t = 0; t < trace.size(); ++t) {
    const ChainState& s = trace.draws[t];
    out << trace.iteration[t] << ',' << format_double(s.alpha) << ',' << format_double(s.beta);
    for (double v : s.rho.data()) out << ',' << format_double(v);
    for (int z : s.z) out << ',' << z + 1;
    out << ',' << format_double(trace.log_post[t]) << '\n';
  }
}

Trace read_trace_csv(const std::filesystem::path& path) {
  const auto rows = read_rows(path);
  if (rows.empty()) throw IoError(path.string() + ": empty trace file");
  const auto& header = rows.front();

  Trace trace;
  std::size_t rho_cols = 0, z_cols = 0;
  for (const auto& h : header) {
    if (h.rfind("rho_", 0) == 0) {
      ++rho_cols;
      const auto sep = h.find('_', 4);
      if (sep == std::string::npos) throw IoError(path.string() + ": bad column " + h);
      trace.k = std::max<int>(trace.k, static_cast<int>(parse_long(h.substr(4, sep - 4), h)));
      trace.r = std::max<std::size_t>(trace.r,
                                      static_cast<std::size_t>(parse_long(h.substr(sep + 1), h)));
    } else if (h.rfind("z_", 0) == 0) {
      ++z_cols;
    }
  }
  trace.n = z_cols;
  if (trace.k == 0 || trace.r == 0 ||
      rho_cols != static_cast<std::size_t>(trace.k) * trace.r ||
      header.size() != 3 + rho_cols + z_cols + 1)
    throw IoError(path.string() + ": malformed trace header");

  for (std::size_t t = 1; t < rows.size(); ++t) {
    const auto& row = rows[t];
    if (row.size() != header.size())
      throw IoError(path.string() + ": row " + std::to_string(t + 1) + " width mismatch");
    const std::string ctx = path.string() + " row " + std::to_string(t + 1);
    std::size_t c = 0;
    trace.iteration.push_back(parse_long(row[c++], ctx));
    ChainState s;
    s.alpha = parse_double(row[c++], ctx);
    s.beta = parse_double(row[c++], ctx);
    s.rho = Matrix(trace.k, trace.r);
    for (double& v : s.rho.data()) v = parse_double(row[c++], ctx);
    s.z.resize(trace.n);
    for (int& z : s.z) {
      z = static_cast<int>(parse_long(row[c++], ctx)) - 1;
      if (z < 0 || z >= trace.k) throw IoError(ctx + ": label out of range");
    }
    trace.log_post.push_back(parse_double(row[c++], ctx));
    trace.draws.push_back(std::move(s));
  }
  return trace;
}

void write_class_probs_csv(const std::filesystem::path& path, const Trace& trace) {
  auto out = open_out(path);
  out << "draw,obs";
  for (int l = 0; l < trace.k; ++l) out << ",m_" << l + 1;
  out << '\n';
  for (std::size_t t = 0; t < trace.class_probs.size(); ++t) {
    const Matrix& m = trace.class_probs[t];
    for (std::size_t j = 0; j < m.rows(); ++j) {
      out << t + 1 << ',' << j + 1;
      for (std::size_t l = 0; l < m.cols(); ++l) out << ',' << format_double(m(j, l));
      out << '\n';
    }
  }
}

void read_class_probs_csv(const std::filesystem::path& path, Trace& trace) {
  const auto rows = read_rows(path);
  if (rows.empty()) throw IoError(path.string() + ": empty class-probs file");
  const std::size_t k = rows.front().size() - 2;
  if (k != static_cast<std::size_t>(trace.k))
    throw IoError(path.string() + ": class-prob columns do not match trace k");
  const std::size_t expected = trace.size() * trace.n;
  if (rows.size() - 1 != expected)
    throw IoError(path.string() + ": expected " + std::to_string(expected) + " rows, found " +
                  std::to_string(rows.size() - 1));

  trace.class_probs.assign(trace.size(), Matrix(trace.n, k));
  for (std::size_t idx = 1; idx < rows.size(); ++idx) {
    const auto& row = rows[idx];
    const std::string ctx = path.string() + " row " + std::to_string(idx + 1);
    if (row.size() != k + 2) throw IoError(ctx + ": width mismatch");
    const long draw = parse_long(row[0], ctx) - 1;
    const long obs = parse_long(row[1], ctx) - 1;
    if (draw < 0 || static_cast<std::size_t>(draw) >= trace.size() || obs < 0 ||
        static_cast<std::size_t>(obs) >= trace.n)
      throw IoError(ctx + ": index out of range");
    for (std::size_t l = 0; l < k; ++l)
      trace.class_probs[draw](obs, l) = parse_double(row[2 + l], ctx);
  }
}

void write_selection_csv(const std::filesystem::path& path,
                         const std::vector<CriterionReport>& reports) {
  auto out = open_out(path);
  out << "k,icl,bic,dic5,lambda_k,map_logpost,best_icl,best_bic,best_dic5\n";
  if (reports.empty()) return;
  std::size_t best_icl = 0, best_bic = 0, best_dic5 = 0;
  for (std::size_t i = 1; i < reports.size(); ++i) {
    if (reports[i].icl > reports[best_icl].icl) best_icl = i;
    if (reports[i].bic < reports[best_bic].bic) best_bic = i;
    if (reports[i].dic5 < reports[best_dic5].dic5) best_dic5 = i;
  }
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const CriterionReport& rep = reports[i];
    out << rep.k << ',' << format_double(rep.icl) << ',' << format_double(rep.bic) << ','
        << format_double(rep.dic5) << ',' << rep.lambda_k << ','
        << format_double(rep.map_logpost) << ',' << (i == best_icl ? 1 : 0) << ','
        << (i == best_bic ? 1 : 0) << ',' << (i == best_dic5 ? 1 : 0) << '\n';
  }
}

Matrix read_matrix_csv(const std::filesystem::path& path) {
  const auto rows = read_rows(path);
  if (rows.empty()) throw IoError(path.string() + ": empty matrix file");
  const std::size_t cols = rows.front().size();
  Matrix m(rows.size(), cols);
  for (std::size_t j = 0; j < rows.size(); ++j) {
    if (rows[j].size() != cols) throw IoError(path.string() + ": ragged rows");
    for (std::size_t i = 0; i < cols; ++i)
      m(j, i) = parse_double(rows[j][i], path.string() + " row " + std::to_string(j + 1));
  }
  return m;
}

}  // namespace dirmix
