#include "dirmix/io.hpp"

#include <fstream>

#include <json.hpp>

#include "dirmix/csv.hpp"
#include "dirmix/errors.hpp"
#include "dirmix/version.hpp"

namespace dirmix {

using ordered_json = nlohmann::ordered_json;

namespace {

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
}

ordered_json load_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  ordered_json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw IoError(path.string() + ": " + e.what());
  }
  return j;
}

const char* mode_name(AllocationMode mode) {
  return mode == AllocationMode::gibbs ? "gibbs" : "metropolis";
}

AllocationMode mode_from(const std::string& name) {
  if (name == "gibbs") return AllocationMode::gibbs;
  if (name == "metropolis") return AllocationMode::metropolis;
  throw IoError("unknown allocation mode '" + name + "'");
}

const char* zero_policy_name(ZeroPolicy p) {
  return p == ZeroPolicy::reject ? "reject" : "epsilon";
}

ZeroPolicy zero_policy_from(const std::string& name) {
  if (name == "reject") return ZeroPolicy::reject;
  if (name == "epsilon") return ZeroPolicy::epsilon;
  throw IoError("unknown zero policy '" + name + "'");
}

ordered_json conventions_json() {
  return ordered_json{
      {"allocation_prior", "dirichlet-multinomial, fully normalized"},
      {"bic_weights", "(n_l(z_map) + delta) / (n + k*delta)"},
      {"bic_nu", "k*r + (k - 1)"},
      {"dic5_joint_term", "log f(p | z, rho) + log pi(z | delta)"},
      {"quantiles", "linear interpolation between order statistics (type 7)"},
      {"hellinger_default_m", 10000},
  };
}

ordered_json summary_json(const ParamSummary& s) {
  return ordered_json{{"lower", s.lower}, {"median", s.median}, {"upper", s.upper}};
}

}  // namespace

std::filesystem::path OutputLayout::chain_csv(int chain) const {
  return dir / ("chain_" + std::to_string(chain + 1) + ".csv");
}

std::filesystem::path OutputLayout::class_probs_csv(int chain) const {
  return dir / ("class_probs_" + std::to_string(chain + 1) + ".csv");
}

void write_manifest(const std::filesystem::path& path, const RunManifest& manifest) {
  ordered_json j;
  j["version"] = manifest.version.empty() ? kVersion : manifest.version;
  j["command"] = manifest.command;
  j["created_utc"] = manifest.created_utc;
  j["input"] = manifest.input;
  j["config"] = ordered_json{
      {"k", manifest.config.k},
      {"chains", manifest.chains},
      {"iterations", manifest.config.iterations},
      {"burn_in", manifest.config.burn_in},
      {"thin", manifest.config.thin},
      {"sigma_alpha", manifest.config.sigma_alpha},
      {"p_var", manifest.config.p_var},
      {"delta", manifest.config.hyper.delta},
      {"gamma", manifest.config.hyper.gamma},
      {"phi", manifest.config.hyper.phi},
      {"lambda", manifest.config.hyper.lambda},
      {"allocation_mode", mode_name(manifest.config.allocation_mode)},
      {"zero_policy", zero_policy_name(manifest.policy.zeros)},
      {"epsilon", manifest.policy.epsilon},
      {"renormalize", manifest.policy.renormalize},
  };
  if (manifest.k_max > 0) {
    j["config"]["k_min"] = manifest.k_min;
    j["config"]["k_max"] = manifest.k_max;
  }
  j["master_seed"] = manifest.master_seed;
  j["chain_seeds"] = manifest.chain_seeds;
  j["conventions"] = conventions_json();
  j["written_utc"] = manifest.written_utc;
  write_text(path, j.dump(2) + "\n");
}

RunManifest read_manifest(const std::filesystem::path& path) {
  const ordered_json j = load_json(path);
  RunManifest m;
  try {
    m.version = j.at("version").get<std::string>();
    m.command = j.at("command").get<std::string>();
    m.created_utc = j.value("created_utc", "");
    m.input = j.at("input").get<std::string>();
    const auto& c = j.at("config");
    m.config.k = c.at("k").get<int>();
    m.chains = c.at("chains").get<int>();
    m.config.iterations = c.at("iterations").get<long>();
    m.config.burn_in = c.at("burn_in").get<long>();
    m.config.thin = c.at("thin").get<long>();
    m.config.sigma_alpha = c.at("sigma_alpha").get<double>();
    m.config.p_var = c.at("p_var").get<double>();
    m.config.hyper.delta = c.at("delta").get<double>();
    m.config.hyper.gamma = c.at("gamma").get<double>();
    m.config.hyper.phi = c.at("phi").get<double>();
    m.config.hyper.lambda = c.at("lambda").get<double>();
    m.config.allocation_mode = mode_from(c.at("allocation_mode").get<std::string>());
    m.policy.zeros = zero_policy_from(c.at("zero_policy").get<std::string>());
    m.policy.epsilon = c.at("epsilon").get<double>();
    m.policy.renormalize = c.at("renormalize").get<bool>();
    m.k_min = c.value("k_min", 0);
    m.k_max = c.value("k_max", 0);
    m.master_seed = j.at("master_seed").get<std::uint64_t>();
    m.chain_seeds = j.at("chain_seeds").get<std::vector<std::uint64_t>>();
  } catch (const ordered_json::exception& e) {
    throw IoError(path.string() + ": " + e.what());
  }
  return m;
}

std::string summary_document(const FitResult& fit,
                             const std::optional<PartitionRecovery>& recovery) {
  const int k = fit.traces.front().k;
  const std::size_t r = fit.traces.front().r;
  ordered_json j;

  ordered_json rho = ordered_json::array();
  ordered_json norm = ordered_json::array();
  for (int l = 0; l < k; ++l) {
    ordered_json row = ordered_json::array();
    ordered_json nrow = ordered_json::array();
    for (std::size_t i = 0; i < r; ++i) {
      row.push_back(summary_json(fit.summaries.rho[l][i]));
      nrow.push_back(summary_json(fit.summaries.normalized[l][i]));
    }
    rho.push_back(row);
    norm.push_back(nrow);
  }
  j["parameters"] = ordered_json{{"rho", rho}};
  j["normalized_parameters"] = ordered_json{{"rho", norm}};

  ordered_json entropy = ordered_json::array();
  for (const EntropyQuantiles& e : fit.entropy)
    entropy.push_back(ordered_json{{"q5", e.q5}, {"q50", e.q50}, {"q95", e.q95}});
  j["entropy"] = entropy;

  ordered_json coalloc = ordered_json::array();
  for (std::size_t a = 0; a < fit.coalloc.rows(); ++a) {
    ordered_json row = ordered_json::array();
    for (std::size_t b = 0; b < fit.coalloc.cols(); ++b) row.push_back(fit.coalloc(a, b));
    coalloc.push_back(row);
  }
  j["coallocation"] = coalloc;

  j["criteria"] = ordered_json{
      {"k", fit.criteria.k},
      {"icl", fit.criteria.icl},
      {"bic", fit.criteria.bic},
      {"dic5", fit.criteria.dic5},
      {"lambda_k", fit.criteria.lambda_k},
      {"map_logpost", fit.criteria.map_logpost},
      {"conventions", conventions_json()},
  };

  ordered_json diag;
  diag["chains"] = fit.traces.size();
  diag["draws_per_chain"] = fit.traces.front().size();
  diag["relabel_converged"] = fit.relabel.converged;
  if (fit.bgr) {
    ordered_json rho_bgr = ordered_json::array();
    for (int l = 0; l < k; ++l) {
      ordered_json row = ordered_json::array();
      for (std::size_t i = 0; i < r; ++i) row.push_back(fit.bgr->rho(l, i));
      rho_bgr.push_back(row);
    }
    diag["bgr"] = ordered_json{
        {"alpha", fit.bgr->alpha}, {"beta", fit.bgr->beta}, {"rho", rho_bgr}};
  } else {
    diag["bgr"] = ordered_json{{"status", "insufficient chains"}};
  }
  ordered_json map;
  map["chain"] = fit.map.chain + 1;
  map["draw"] = fit.map.draw + 1;
  map["iteration"] = fit.map.iteration;
  map["log_post"] = fit.map.log_post;
  map["alpha"] = fit.map.state.alpha;
  map["beta"] = fit.map.state.beta;
  ordered_json zmap = ordered_json::array();
  for (int z : fit.map.state.z) zmap.push_back(z + 1);
  map["z"] = zmap;
  ordered_json rho_map = ordered_json::array();
  for (int l = 0; l < k; ++l) {
    ordered_json row = ordered_json::array();
    for (std::size_t i = 0; i < r; ++i) row.push_back(fit.map.state.rho(l, i));
    rho_map.push_back(row);
  }
  map["rho"] = rho_map;
  diag["map"] = map;

  if (recovery) {
    ordered_json confusion = ordered_json::array();
    const Matrix& counts = recovery->confusion.counts;
    for (std::size_t a = 0; a < counts.rows(); ++a) {
      ordered_json row = ordered_json::array();
      for (std::size_t b = 0; b < counts.cols(); ++b)
        row.push_back(static_cast<long>(counts(a, b)));
      confusion.push_back(row);
    }
    diag["partition_recovery"] = ordered_json{
        {"accuracy", recovery->confusion.accuracy},
        {"ari", recovery->confusion.ari},
        {"confusion", confusion},
    };
  }
  j["diagnostics"] = diag;
  return j.dump(2) + "\n";
}

void write_summary(const std::filesystem::path& path, const FitResult& fit,
                   const std::optional<PartitionRecovery>& recovery) {
  write_text(path, summary_document(fit, recovery));
}

void write_accept_stats(const std::filesystem::path& path, const std::vector<Trace>& traces) {
  ordered_json chains = ordered_json::array();
  for (const Trace& t : traces) {
    ordered_json c;
    c["alpha"] = ordered_json{{"proposals", t.accept.alpha.proposals},
                              {"accepts", t.accept.alpha.accepts}};
    c["allocations"] = ordered_json{{"proposals", t.accept.allocations.proposals},
                                    {"accepts", t.accept.allocations.accepts}};
    ordered_json rho = ordered_json::array();
    for (const AcceptCounter& a : t.accept.rho)
      rho.push_back(ordered_json{{"proposals", a.proposals}, {"accepts", a.accepts}});
    c["rho"] = rho;
    c["k"] = t.k;
    c["r"] = t.r;
    chains.push_back(c);
  }
  write_text(path, ordered_json{{"chains", chains}}.dump(2) + "\n");
}

std::vector<AcceptStats> read_accept_stats(const std::filesystem::path& path) {
  const ordered_json j = load_json(path);
  std::vector<AcceptStats> out;
  try {
    for (const auto& c : j.at("chains")) {
      AcceptStats s;
      s.alpha = {c.at("alpha").at("proposals").get<long>(),
                 c.at("alpha").at("accepts").get<long>()};
      s.allocations = {c.at("allocations").at("proposals").get<long>(),
                       c.at("allocations").at("accepts").get<long>()};
      for (const auto& a : c.at("rho"))
        s.rho.push_back({a.at("proposals").get<long>(), a.at("accepts").get<long>()});
      out.push_back(std::move(s));
    }
  } catch (const ordered_json::exception& e) {
    throw IoError(path.string() + ": " + e.what());
  }
  return out;
}

std::string diagnostics_document(const std::optional<BgrReport>& bgr,
                                 const std::vector<AcceptStats>& accept,
                                 std::vector<std::string>& warnings) {
  ordered_json j;
  if (bgr) {
    ordered_json rho = ordered_json::array();
    for (std::size_t l = 0; l < bgr->rho.rows(); ++l) {
      ordered_json row = ordered_json::array();
      for (std::size_t i = 0; i < bgr->rho.cols(); ++i) row.push_back(bgr->rho(l, i));
      rho.push_back(row);
    }
    j["bgr"] = ordered_json{{"alpha", bgr->alpha}, {"beta", bgr->beta}, {"rho", rho}};
    if (bgr->max_rho() > 1.1)
      warnings.push_back("BGR above 1.1 for at least one rho entry: chains have not converged");
  } else {
    j["bgr"] = ordered_json{{"status", "insufficient chains"}};
  }

  ordered_json chains = ordered_json::array();
  for (std::size_t c = 0; c < accept.size(); ++c) {
    const AcceptStats& s = accept[c];
    ordered_json cj;
    cj["alpha_rate"] = s.alpha.rate();
    if (s.allocations.proposals > 0) cj["allocation_rate"] = s.allocations.rate();
    ordered_json rates = ordered_json::array();
    for (std::size_t e = 0; e < s.rho.size(); ++e) {
      const double rate = s.rho[e].rate();
      rates.push_back(rate);
      if (rate < 0.10 || rate > 0.80)
        warnings.push_back("chain " + std::to_string(c + 1) + " rho entry " +
                           std::to_string(e + 1) + " acceptance rate " +
                           format_double(rate) + " outside [0.10, 0.80]");
    }
    cj["rho_rates"] = rates;
    chains.push_back(cj);
  }
  j["acceptance"] = chains;
  j["warnings"] = warnings;
  return j.dump(2) + "\n";
}

}  // namespace dirmix
