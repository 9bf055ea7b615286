#include <chrono>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dirmix/csv.hpp"
#include "dirmix/errors.hpp"
#include "dirmix/fit.hpp"
#include "dirmix/io.hpp"
#include "dirmix/sampler.hpp"
#include "dirmix/synth.hpp"
#include "dirmix/version.hpp"

namespace fs = std::filesystem;
using namespace dirmix;

namespace {

std::string utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::uint64_t entropy_seed() {
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

struct CommonOpts {
  std::string input;
  std::string out;
  std::string truth;
  std::string manifest;
  int k = 2;
  int chains = 5;
  long iterations = 50000;
  long burn_in = 10000;
  long thin = 5;
  double sigma_alpha = 0.5;
  double p_var = 0.7;
  double delta = 0.5;
  double gamma = 0.2;
  double phi = 5.0;
  double lambda = 6.0;
  std::string allocation_mode = "gibbs";
  std::string zero_policy = "reject";
  double epsilon = 1e-6;
  bool renormalize = false;
  std::int64_t seed = -1;
};

void add_sampler_flags(CLI::App* cmd, CommonOpts& o, bool with_k) {
  cmd->add_option("--input", o.input, "input dataset CSV");
  if (with_k) cmd->add_option("--k", o.k, "number of mixture components");
  cmd->add_option("--chains", o.chains, "parallel chains")->capture_default_str();
  cmd->add_option("--iterations", o.iterations, "MCMC sweeps per chain")->capture_default_str();
  cmd->add_option("--burn-in", o.burn_in, "discarded sweeps")->capture_default_str();
  cmd->add_option("--thin", o.thin, "keep every thin-th sweep")->capture_default_str();
  cmd->add_option("--sigma-alpha", o.sigma_alpha, "alpha proposal scale")->capture_default_str();
  cmd->add_option("--p-var", o.p_var, "rho proposal variance fraction")->capture_default_str();
  cmd->add_option("--delta", o.delta, "allocation prior weight")->capture_default_str();
  cmd->add_option("--gamma", o.gamma, "rate of the exponential prior on alpha")
      ->capture_default_str();
  cmd->add_option("--phi", o.phi, "shape of the gamma prior on beta")->capture_default_str();
  cmd->add_option("--lambda", o.lambda, "rate of the gamma prior on beta")->capture_default_str();
  cmd->add_option("--allocation-mode", o.allocation_mode, "gibbs|metropolis")
      ->capture_default_str();
  cmd->add_option("--zero-policy", o.zero_policy, "reject|epsilon")->capture_default_str();
  cmd->add_option("--epsilon", o.epsilon, "replacement for zero entries")->capture_default_str();
  cmd->add_flag("--renormalize", o.renormalize, "renormalize rows regardless of sum");
  cmd->add_option("--seed", o.seed, "master RNG seed (omit for entropy)");
  cmd->add_option("--out", o.out, "output directory")->required();
  cmd->add_option("--truth", o.truth, "ground-truth labels CSV for recovery metrics");
  cmd->add_option("--manifest", o.manifest, "replay configuration from an emitted manifest");
}

RunManifest build_manifest(const CommonOpts& o, const std::string& command) {
  RunManifest m;
  m.version = kVersion;
  m.command = command;
  m.created_utc = utc_now();
  m.input = o.input;
  m.chains = o.chains;
  m.config.k = o.k;
  m.config.iterations = o.iterations;
  m.config.burn_in = o.burn_in;
  m.config.thin = o.thin;
  m.config.sigma_alpha = o.sigma_alpha;
  m.config.p_var = o.p_var;
  m.config.hyper = {o.delta, o.gamma, o.phi, o.lambda};
  if (o.allocation_mode == "gibbs") {
    m.config.allocation_mode = AllocationMode::gibbs;
  } else if (o.allocation_mode == "metropolis") {
    m.config.allocation_mode = AllocationMode::metropolis;
  } else {
    throw ConfigError("allocation mode must be gibbs or metropolis");
  }
  if (o.zero_policy == "reject") {
    m.policy.zeros = ZeroPolicy::reject;
  } else if (o.zero_policy == "epsilon") {
    m.policy.zeros = ZeroPolicy::epsilon;
  } else {
    throw ConfigError("zero policy must be reject or epsilon");
  }
  m.policy.epsilon = o.epsilon;
  m.policy.renormalize = o.renormalize;
  m.master_seed = o.seed >= 0 ? static_cast<std::uint64_t>(o.seed) : entropy_seed();
  return m;
}

RunManifest resolve_manifest(const CommonOpts& o, const std::string& command) {
  if (o.manifest.empty()) {
    if (o.input.empty()) throw ConfigError("--input is required (or --manifest)");
    return build_manifest(o, command);
  }
  RunManifest m = read_manifest(o.manifest);
  m.created_utc = utc_now();
  return m;
}

std::optional<PartitionRecovery> recovery_block(const std::string& truth_path,
                                                const std::vector<int>& map_z) {
  if (truth_path.empty()) return std::nullopt;
  const std::vector<int> truth = read_labels_csv(truth_path);
  return PartitionRecovery{confusion_matrix(truth, map_z)};
}

int cmd_fit(const CommonOpts& o) {
  RunManifest manifest = resolve_manifest(o, "fit");
  const DatasetCsv input = read_dataset_csv(manifest.input, manifest.policy);

  FitOptions options;
  options.base = manifest.config;
  options.chains = manifest.chains;
  options.master_seed = manifest.master_seed;
  const FitResult fit = fit_model(input.data, options);
  manifest.chain_seeds = fit.chain_seeds;

  OutputLayout layout{fs::path(o.out)};
  fs::create_directories(layout.dir);
  for (std::size_t c = 0; c < fit.traces.size(); ++c) {
    write_trace_csv(layout.chain_csv(static_cast<int>(c)), fit.traces[c]);
    write_class_probs_csv(layout.class_probs_csv(static_cast<int>(c)), fit.traces[c]);
  }
  write_accept_stats(layout.accept_stats_json(), fit.traces);
  write_summary(layout.summary_json(), fit, recovery_block(o.truth, fit.map.state.z));
  manifest.written_utc = utc_now();
  write_manifest(layout.manifest_json(), manifest);

  std::cout << layout.summary_json().string() << '\n' << layout.manifest_json().string() << '\n';
  return 0;
}

int cmd_select(const CommonOpts& o, int k_min, int k_max) {
  RunManifest manifest = resolve_manifest(o, "select");
  if (manifest.k_max > 0) {
    k_min = manifest.k_min;
    k_max = manifest.k_max;
  } else {
    manifest.k_min = k_min;
    manifest.k_max = k_max;
  }
  if (k_min < 1 || k_min > k_max) throw ConfigError("need 1 <= k-min <= k-max");
  const DatasetCsv input = read_dataset_csv(manifest.input, manifest.policy);

  FitOptions base;
  base.base = manifest.config;
  base.chains = manifest.chains;
  base.master_seed = manifest.master_seed;
  const std::vector<CriterionReport> reports = scan_k(input.data, base, k_min, k_max);

  OutputLayout layout{fs::path(o.out)};
  fs::create_directories(layout.dir);
  write_selection_csv(layout.selection_csv(), reports);
  manifest.written_utc = utc_now();
  write_manifest(layout.manifest_json(), manifest);

  const CriterionReport* best_icl = &reports.front();
  const CriterionReport* best_bic = &reports.front();
  const CriterionReport* best_dic5 = &reports.front();
  for (const CriterionReport& rep : reports) {
    if (rep.icl > best_icl->icl) best_icl = &rep;
    if (rep.bic < best_bic->bic) best_bic = &rep;
    if (rep.dic5 < best_dic5->dic5) best_dic5 = &rep;
  }
  std::cout << layout.selection_csv().string() << '\n'
            << "recommended_k icl=" << best_icl->k << " bic=" << best_bic->k
            << " dic5=" << best_dic5->k << '\n';
  return 0;
}

int cmd_simulate(const std::string& scenario_name, const std::string& rho_file,
                 const std::string& sizes_arg, std::int64_t seed, const std::string& out) {
  Scenario scenario;
  if (!scenario_name.empty()) {
    scenario = find_scenario(scenario_name);
  } else if (!rho_file.empty()) {
    scenario.label = "custom";
    scenario.rho_true = read_matrix_csv(rho_file);
    if (scenario.rho_true.rows() < 1 || scenario.rho_true.cols() < 2)
      throw ConfigError("--rho-file needs k >= 1 rows and r >= 2 columns");
  } else {
    throw ConfigError("need --scenario or --rho-file");
  }
  if (!sizes_arg.empty()) {
    scenario.sizes.clear();
    std::stringstream ss(sizes_arg);
    std::string token;
    while (std::getline(ss, token, ','))
      scenario.sizes.push_back(static_cast<int>(std::stol(token)));
  }
  if (scenario.sizes.size() != scenario.rho_true.rows())
    throw ConfigError("--sizes must list one count per mixture component");
  scenario.seed = seed >= 0 ? static_cast<std::uint64_t>(seed) : entropy_seed();

  const GeneratedData generated = generate(scenario);
  fs::create_directories(out);
  std::vector<std::string> part_names;
  for (std::size_t i = 0; i < generated.data.parts(); ++i)
    part_names.push_back("p" + std::to_string(i + 1));
  std::vector<std::string> ids;
  for (std::size_t j = 0; j < generated.data.n(); ++j) ids.push_back(std::to_string(j + 1));

  const fs::path data_path = fs::path(out) / "data.csv";
  const fs::path truth_path = fs::path(out) / "truth.csv";
  write_dataset_csv(data_path, generated.data.values(), part_names, ids);
  write_labels_csv(truth_path, generated.labels, ids);
  {
    nlohmann::ordered_json j;
    j["version"] = kVersion;
    j["command"] = "simulate";
    j["created_utc"] = utc_now();
    j["scenario"] = scenario.label;
    j["sizes"] = scenario.sizes;
    j["seed"] = scenario.seed;
    std::ofstream manifest(fs::path(out) / "manifest.json");
    if (!manifest) throw IoError("cannot write simulate manifest");
    manifest << j.dump(2) << '\n';
  }
  std::cout << data_path.string() << '\n' << truth_path.string() << '\n';
  return 0;
}

std::vector<Trace> load_traces(const fs::path& dir, bool with_class_probs) {
  std::vector<Trace> traces;
  for (int c = 0;; ++c) {
    const fs::path chain = dir / ("chain_" + std::to_string(c + 1) + ".csv");
    if (!fs::exists(chain)) break;
    Trace trace = read_trace_csv(chain);
    if (with_class_probs) {
      const fs::path probs = dir / ("class_probs_" + std::to_string(c + 1) + ".csv");
      read_class_probs_csv(probs, trace);
    }
    traces.push_back(std::move(trace));
  }
  if (traces.empty()) throw IoError("no chain_*.csv files in " + dir.string());
  for (const Trace& t : traces)
    if (t.k != traces.front().k || t.n != traces.front().n || t.r != traces.front().r)
      throw IoError("trace files in " + dir.string() + " have mismatched dimensions");
  return traces;
}

int cmd_summarize(const std::string& trace_dir, const std::string& out,
                  const std::string& truth) {
  const fs::path dir(trace_dir);
  const RunManifest manifest = read_manifest(dir / "manifest.json");
  const DatasetCsv input = read_dataset_csv(manifest.input, manifest.policy);
  std::vector<Trace> traces = load_traces(dir, true);
  for (const Trace& t : traces)
    if (t.n != input.data.n()) throw IoError("traces do not match the input dataset");

  const FitResult fit =
      postprocess_traces(std::move(traces), input.data, manifest.config.hyper);
  fs::create_directories(out);
  const fs::path path = fs::path(out) / "summary.json";
  write_summary(path, fit, recovery_block(truth, fit.map.state.z));
  std::cout << path.string() << '\n';
  return 0;
}

int cmd_diagnose(const std::string& trace_dir, const std::string& out) {
  const fs::path dir(trace_dir);
  const std::vector<Trace> traces = load_traces(dir, false);

  std::optional<BgrReport> bgr;
  if (traces.size() >= 2) bgr = compute_bgr(traces);

  std::vector<AcceptStats> accept;
  if (fs::exists(dir / "accept_stats.json")) accept = read_accept_stats(dir / "accept_stats.json");

  std::vector<std::string> warnings;
  const std::string doc = diagnostics_document(bgr, accept, warnings);
  const OutputLayout layout{out.empty() ? dir : fs::path(out)};
  fs::create_directories(layout.dir);
  const fs::path path = layout.diagnostics_json();
  {
    std::ofstream file(path);
    if (!file) throw IoError("cannot write " + path.string());
    file << doc;
  }
  std::cout << path.string() << '\n';
  for (const std::string& w : warnings) std::cout << "warning: " << w << '\n';
  return 0;
}

int dispatch(int argc, char** argv) {
  CLI::App app{"Bayesian clustering of compositional data with Dirichlet mixtures"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  CommonOpts fit_opts;
  CLI::App* fit_cmd = app.add_subcommand("fit", "fit a k-component mixture");
  add_sampler_flags(fit_cmd, fit_opts, true);

  CommonOpts select_opts;
  int k_min = 1, k_max = 5;
  CLI::App* select_cmd = app.add_subcommand("select", "scan k and report ICL/BIC/DIC5");
  add_sampler_flags(select_cmd, select_opts, false);
  select_cmd->add_option("--k-min", k_min, "smallest k")->capture_default_str();
  select_cmd->add_option("--k-max", k_max, "largest k")->capture_default_str();

  std::string scenario, rho_file, sizes_arg, sim_out;
  std::int64_t sim_seed = -1;
  CLI::App* sim_cmd = app.add_subcommand("simulate", "generate a synthetic dataset");
  sim_cmd->add_option("--scenario", scenario, "benchmark scenario name (e.g. high2, low3_n30)");
  sim_cmd->add_option("--rho-file", rho_file, "headerless CSV of k x r concentrations");
  sim_cmd->add_option("--sizes", sizes_arg, "comma-separated per-cluster counts");
  sim_cmd->add_option("--seed", sim_seed, "RNG seed");
  sim_cmd->add_option("--out", sim_out, "output directory")->required();

  std::string sum_dir, sum_out, sum_truth;
  CLI::App* sum_cmd = app.add_subcommand("summarize", "recompute summaries from stored traces");
  sum_cmd->add_option("--trace-dir", sum_dir, "directory with chain CSVs and manifest")->required();
  sum_cmd->add_option("--out", sum_out, "output directory")->required();
  sum_cmd->add_option("--truth", sum_truth, "ground-truth labels CSV");

  std::string diag_dir, diag_out;
  CLI::App* diag_cmd = app.add_subcommand("diagnose", "BGR and acceptance-rate report");
  diag_cmd->add_option("--trace-dir", diag_dir, "directory with chain CSVs")->required();
  diag_cmd->add_option("--out", diag_out, "output directory (default: trace dir)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return 3;
  }

  if (fit_cmd->parsed()) return cmd_fit(fit_opts);
  if (select_cmd->parsed()) return cmd_select(select_opts, k_min, k_max);
  if (sim_cmd->parsed()) return cmd_simulate(scenario, rho_file, sizes_arg, sim_seed, sim_out);
  if (sum_cmd->parsed()) return cmd_summarize(sum_dir, sum_out, sum_truth);
  if (diag_cmd->parsed()) return cmd_diagnose(diag_dir, diag_out);
  return 3;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return dispatch(argc, argv);
  } catch (const NonPositiveEntry& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return 2;
  } catch (const RowSumViolation& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return 2;
  } catch (const IoError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return 2;
  } catch (const LengthMismatch& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return 2;
  } catch (const EmptyTrace& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return 2;
  } catch (const InsufficientChains& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return 2;
  } catch (const MissingClassProbs& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return 2;
  } catch (const UnknownScenario& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 3;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  }
}
