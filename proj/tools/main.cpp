#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "mcse/autocov.hpp"
#include "mcse/batch.hpp"
#include "mcse/bench.hpp"
#include "mcse/cc.hpp"
#include "mcse/chain.hpp"
#include "mcse/diagnostics.hpp"
#include "mcse/errors.hpp"
#include "mcse/mise.hpp"

namespace {

constexpr std::uint64_t kDefaultSeed = 20240613;

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitNumerical = 4;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<mcse::Method> parse_methods(const std::vector<std::string>& specs) {
  std::vector<mcse::Method> methods;
  for (const std::string& spec : specs) {
    std::stringstream ss(spec);
    std::string tag;
    while (std::getline(ss, tag, ',')) {
      if (tag.empty()) continue;
      try {
        methods.push_back(mcse::method_from_name(tag));
      } catch (const std::exception& e) {
        throw UsageError(e.what());
      }
    }
  }
  if (methods.empty()) throw UsageError("at least one --method is required");
  return methods;
}

template <typename T>
std::vector<T> parse_comma_list(const std::string& spec, const char* flag) {
  std::vector<T> values;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      if constexpr (std::is_floating_point_v<T>)
        values.push_back(static_cast<T>(std::stod(item)));
      else
        values.push_back(static_cast<T>(std::stoll(item)));
    } catch (const std::exception&) {
      throw UsageError(std::string("bad value '") + item + "' for " + flag);
    }
  }
  if (values.empty()) throw UsageError(std::string("empty list for ") + flag);
  return values;
}

int thread_count(int requested) {
  if (const char* env = std::getenv("MCMC_SE_THREADS")) {
    try {
      const int cap = std::stoi(env);
      if (cap >= 1) return std::min(requested, cap);
    } catch (const std::exception&) {
    }
  }
  return requested;
}

nlohmann::json matrix_json(const Eigen::MatrixXd& m) {
  std::vector<double> data;
  data.reserve(static_cast<std::size_t>(m.size()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) data.push_back(m(i, j));
  return {{"dim", m.rows()}, {"data", data}};
}

void write_text(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw mcse::data_error("cannot open output file " + out_path);
  out << text;
}

bool pooled_method(mcse::Method m) {
  return m == mcse::Method::gbm || m == mcse::Method::gcc_ise ||
         m == mcse::Method::stan_cc;
}

int cmd_estimate(const std::vector<std::string>& method_specs,
                 const std::vector<std::string>& inputs, bool header,
                 long batch_size, const std::string& mise_mode,
                 const std::string& out_path) {
  const std::vector<mcse::Method> methods = parse_methods(method_specs);
  if (inputs.empty()) throw UsageError("estimate requires at least one --input");

  std::vector<mcse::Chain> chains;
  for (const std::string& path : inputs)
    chains.push_back(mcse::load_chain_file(path, header));
  const mcse::MultiChain mc(std::move(chains));
  const Eigen::Index n = mc.n();

  for (mcse::Method m : methods) {
    if (m == mcse::Method::stan_cc && mc.M() < 2)
      throw UsageError("stan-cc needs at least 2 input chains");
    if (!pooled_method(m) && mc.M() > 1)
      throw UsageError(mcse::method_name(m) + " takes exactly one input chain");
  }

  const mcse::BatchConfig bcfg = batch_size > 0 ? mcse::batch_config(n, batch_size)
                                                : mcse::default_batch_size(n);
  const mcse::MiseMode mode =
      mise_mode == "sequential" ? mcse::MiseMode::sequential : mcse::MiseMode::fft;

  nlohmann::json report;
  for (mcse::Method m : methods) {
    nlohmann::json entry;
    mcse::CovEstimate est;
    switch (m) {
      case mcse::Method::bm:
        est.sigma = mcse::batch_means_cov(mc.chain(0), bcfg);
        entry["b_n"] = bcfg.b_n;
        break;
      case mcse::Method::gbm:
        est.sigma = mcse::gbm_cov(mc, bcfg);
        entry["b_n"] = bcfg.b_n;
        break;
      case mcse::Method::sve:
        est.sigma = mcse::spectral_variance(mc.chain(0), bcfg.b_n);
        entry["bandwidth"] = bcfg.b_n;
        break;
      case mcse::Method::mise: {
        const mcse::MiseResult r = mcse::mise(mc.chain(0), mode);
        est.sigma = r.sigma;
        entry["s_n"] = r.s_n;
        entry["t_n"] = r.t_n;
        entry["budget_exhausted"] = r.budget_exhausted;
        break;
      }
      case mcse::Method::cc_ise:
        est = mcse::cc_ise(mc.chain(0), bcfg);
        break;
      case mcse::Method::gcc_ise:
        est = mcse::gcc_ise(mc, bcfg);
        break;
      case mcse::Method::stan_cc:
        est = mcse::stan_cc(mc, bcfg);
        break;
    }
    est.method = m;
    if (!est.diagnostics.trunc.empty()) entry["trunc"] = est.diagnostics.trunc;
    if (est.diagnostics.b_n > 0) entry["b_n"] = est.diagnostics.b_n;
    entry["sigma"] = matrix_json(est.sigma);

    const bool pooled = pooled_method(m);
    const double n_eff = static_cast<double>(n) * (pooled ? static_cast<double>(mc.M()) : 1.0);
    const Eigen::MatrixXd zeta0 = pooled
                                      ? mcse::autocov_global(mc, 0).lags[0]
                                      : mcse::autocov_direct(mc.chain(0), 0).lags[0];
    const mcse::EssValue ess = mcse::ess_from_parts(zeta0, est.sigma, n_eff);
    entry["ess"] = ess.ess;
    entry["ess_per_n"] = ess.ess_per_n;
    report[mcse::method_name(m)] = std::move(entry);
  }
  write_text(out_path, report.dump(2) + "\n");
  return 0;
}

int cmd_benchmark(const std::vector<std::string>& method_specs, int d, double rho,
                  const std::string& n_spec, int reps, int chains,
                  std::uint64_t seed, long batch_size, const std::string& mise_mode,
                  bool allow_slow, int threads, const std::string& out_prefix,
                  const std::string& format) {
  mcse::BenchmarkConfig cfg;
  cfg.d = d;
  cfg.rho = rho;
  cfg.n_grid.clear();
  for (long long n : parse_comma_list<long long>(n_spec, "--n"))
    cfg.n_grid.push_back(static_cast<Eigen::Index>(n));
  cfg.reps = reps;
  cfg.methods = parse_methods(method_specs);
  cfg.seed = seed;
  cfg.chains = chains;
  cfg.batch_size = batch_size;
  cfg.mise_mode =
      mise_mode == "sequential" ? mcse::MiseMode::sequential : mcse::MiseMode::fft;
  cfg.threads = thread_count(threads);

  const bool has_mise =
      std::find(cfg.methods.begin(), cfg.methods.end(), mcse::Method::mise) !=
      cfg.methods.end();
  const Eigen::Index n_max =
      *std::max_element(cfg.n_grid.begin(), cfg.n_grid.end());
  if (has_mise && n_max >= 500000 && !allow_slow)
    throw UsageError(
        "mise at n >= 500000 is quadratic-cost; pass --allow-slow to confirm");
  if (std::find(cfg.methods.begin(), cfg.methods.end(), mcse::Method::stan_cc) !=
          cfg.methods.end() &&
      cfg.chains < 2)
    throw UsageError("stan-cc requires --chains >= 2");

  const mcse::BenchmarkReport report = mcse::run_benchmark(cfg);

  std::ostringstream csv, json;
  mcse::write_csv(report, csv);
  mcse::write_json_summary(report, json);
  if (out_prefix.empty()) {
    std::cout << (format == "json" ? json.str() : csv.str());
  } else {
    write_text(out_prefix + ".csv", csv.str());
    write_text(out_prefix + ".json", json.str());
  }
  return 0;
}

int cmd_bias(int d, const std::string& rho_spec, long long n, long batch_size,
             int reps, std::uint64_t seed, const std::string& out_path) {
  mcse::BiasConfig cfg;
  cfg.d = d;
  cfg.rho_grid = parse_comma_list<double>(rho_spec, "--rho");
  cfg.n = static_cast<Eigen::Index>(n);
  cfg.b_n = batch_size;
  cfg.reps = reps;
  cfg.seed = seed;
  const std::vector<mcse::BiasRow> rows = mcse::bias_experiment(cfg);
  std::ostringstream csv;
  mcse::write_bias_csv(rows, csv);
  write_text(out_path, csv.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Asymptotic covariance estimation for MCMC sample means"};
  app.require_subcommand(1);

  std::vector<std::string> method_specs;
  std::vector<std::string> inputs;
  bool header = false;
  int d = 12;
  double rho = 1.01;
  std::string n_spec = "5000,10000,50000,100000";
  std::string rho_spec = "1.005,1.01,1.02,1.05";
  int reps = 200;
  int bias_reps = 100;
  int chains = 1;
  long long bias_n = 10000;
  std::uint64_t seed = kDefaultSeed;
  long batch_size = 0;
  std::string mise_mode = "fft";
  bool allow_slow = false;
  int threads = 1;
  std::string out_path;
  std::string format = "csv";

  const std::string method_help =
      "Estimator tag, repeatable or comma-separated: "
      "cc-ise, gcc-ise, stan-cc, mise, bm, gbm, sve";

  CLI::App* est = app.add_subcommand("estimate", "Estimate on chains read from CSV files");
  est->add_option("--method,--methods", method_specs, method_help);
  est->add_option("--input", inputs, "Chain CSV (repeat for parallel chains)");
  est->add_flag("--header", header, "Inputs carry a single header row");
  est->add_option("--batch-size", batch_size, "Batch size override (default n^(1/3))");
  est->add_option("--mise-mode", mise_mode, "mise schedule: fft or sequential")
      ->check(CLI::IsMember({"fft", "sequential"}));
  est->add_option("--out", out_path, "Output JSON path (default stdout)");

  CLI::App* bench = app.add_subcommand("benchmark", "Replicated VAR(1) benchmark");
  bench->add_option("--method,--methods", method_specs, method_help);
  bench->add_option("--d", d, "Dimension (Hadamard order)");
  bench->add_option("--rho", rho, "Spectrum parameter, > 1");
  bench->add_option("--n", n_spec, "Comma-separated chain lengths");
  bench->add_option("--reps", reps, "Replications per (method, n)");
  bench->add_option("--chains", chains, "Parallel chains M per replication");
  bench->add_option("--seed", seed, "Base seed");
  bench->add_option("--batch-size", batch_size, "Batch size override");
  bench->add_option("--mise-mode", mise_mode, "mise schedule: fft or sequential")
      ->check(CLI::IsMember({"fft", "sequential"}));
  bench->add_flag("--allow-slow", allow_slow, "Permit mise at n >= 500000");
  bench->add_option("--threads", threads, "Worker threads (capped by MCMC_SE_THREADS)");
  bench->add_option("--out", out_path, "Output prefix for .csv and .json");
  bench->add_option("--format", format, "Stdout format when --out is absent")
      ->check(CLI::IsMember({"csv", "json"}));

  CLI::App* bias = app.add_subcommand("bias", "Batch-means bias comparison on the VAR(1) grid");
  bias->add_option("--d", d, "Dimension");
  bias->add_option("--rho", rho_spec, "Comma-separated rho grid (0 = independent)");
  bias->add_option("--n", bias_n, "Chain length");
  bias->add_option("--reps", bias_reps, "Replications per rho");
  bias->add_option("--seed", seed, "Base seed");
  bias->add_option("--batch-size", batch_size, "Batch size override");
  bias->add_option("--out", out_path, "Output CSV path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (est->parsed())
      return cmd_estimate(method_specs, inputs, header, batch_size, mise_mode, out_path);
    if (bench->parsed())
      return cmd_benchmark(method_specs, d, rho, n_spec, reps, chains, seed,
                           batch_size, mise_mode, allow_slow, threads, out_path,
                           format);
    return cmd_bias(d, rho_spec, bias_n, batch_size, bias_reps, seed, out_path);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const mcse::data_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const mcse::numerical_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
}
