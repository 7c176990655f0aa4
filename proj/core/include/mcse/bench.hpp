#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "mcse/cc.hpp"
#include "mcse/mise.hpp"
#include "mcse/var.hpp"

namespace mcse {

struct BenchmarkConfig {
  int d = 12;
  double rho = 1.01;
  std::vector<Eigen::Index> n_grid = {5000, 10000, 50000, 100000};
  int reps = 200;
  std::vector<Method> methods = {Method::bm, Method::cc_ise};
  std::uint64_t seed = 0;
  int chains = 1;               // M; parallel methods pool across chains
  Eigen::Index batch_size = 0;  // 0 = study schedule min(8 n^(1/3), n/65)
  MiseMode mise_mode = MiseMode::fft;
  int threads = 1;
  double level = 0.95;
};

struct BenchmarkRow {
  Method method = Method::bm;
  Eigen::Index n = 0;
  int rep = 0;
  double rel_frobenius = 0.0;
  double ess_per_n = 0.0;
  bool covered = false;
  long trunc = 0;  // t_n (mise), max k_n (ISE families), b_n / bandwidth otherwise
  double wall_clock = 0.0;
};

struct BenchmarkError {
  Method method = Method::bm;
  Eigen::Index n = 0;
  int rep = 0;
  std::string message;
};

/// Rows ordered by (n-grid position, rep, method position); failed rows are
/// moved to `errors` and do not abort the report. Everything except
/// wall_clock is bit-reproducible given (config, seed).
struct BenchmarkReport {
  BenchmarkConfig config;
  std::vector<BenchmarkRow> rows;
  std::vector<BenchmarkError> errors;
};

BenchmarkReport run_benchmark(const BenchmarkConfig& cfg);

/// One line per row: method,n,rep,rel_frobenius,ess_per_n,covered,trunc,wall_clock_s.
void write_csv(const BenchmarkReport& report, std::ostream& out);

/// Per method x n aggregates (mean, sd, quantiles) plus the config echo and
/// any per-row errors.
void write_json_summary(const BenchmarkReport& report, std::ostream& out);

struct BiasConfig {
  int d = 12;
  std::vector<double> rho_grid = {1.005, 1.01, 1.02, 1.05};  // 0 = independent model
  Eigen::Index n = 10000;
  Eigen::Index b_n = 0;  // 0 = floor(n^(1/3))
  int reps = 100;
  std::uint64_t seed = 0;
};

struct BiasRow {
  double rho = 0.0;
  double cov_rel_bias = 0.0;   // mean elementwise relative bias of the BM covariance
  double corr_rel_bias = 0.0;  // same for L R_BM L with the true L
  double cov_rel_det = 0.0;    // mean of (det BM / det truth)^(1/d)
  double corr_rel_det = 0.0;
};

/// Replicated comparison of the batch-means covariance against the
/// true-variance / estimated-correlation reconstruction on the VAR model.
std::vector<BiasRow> bias_experiment(const BiasConfig& cfg);

void write_bias_csv(const std::vector<BiasRow>& rows, std::ostream& out);

}  // namespace mcse
