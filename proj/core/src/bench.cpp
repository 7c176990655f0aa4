#include "mcse/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <thread>

#include <nlohmann/json.hpp>

#include "mcse/autocov.hpp"
#include "mcse/batch.hpp"
#include "mcse/diagnostics.hpp"
#include "mcse/errors.hpp"
#include "mcse/linalg.hpp"
#include "mcse/rng.hpp"

namespace mcse {

namespace {

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point t0) {
  return std::chrono::duration<double>(clock_type::now() - t0).count();
}

bool pooled_method(Method m) {
  return m == Method::gbm || m == Method::gcc_ise || m == Method::stan_cc;
}

/// Batch schedule for the study model. The cube-root rate carries a
/// proportionality constant sized for the model's autocorrelation (the
/// recommended b grows with integrated autocorrelation time, roughly
/// (2*phi/(1-phi^2))^(2/3) averaged over the spectrum, ~8 here), and the
/// batch count is kept at >= 65 so the 12x12 batch correlation stays
/// well-conditioned at the short end of the grid.
BatchConfig study_batch_size(Eigen::Index n) {
  const auto cube = static_cast<Eigen::Index>(8.0 * std::cbrt(static_cast<double>(n)));
  const Eigen::Index b = std::max<Eigen::Index>(1, std::min(cube, n / 65));
  return batch_config(n, b);
}

long max_trunc(const std::vector<long>& v) {
  long best = -1;
  for (long k : v) best = std::max(best, k);
  return best;
}

/// Average over chains of the grand-mean-centered lag-0 covariance.
Eigen::MatrixXd pooled_lag0(const MultiChain& mc) {
  const MeanVector mean = global_mean(mc);
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(mc.d(), mc.d());
  for (const Chain& c : mc.chains()) {
    const Eigen::MatrixXd centered = c.samples().rowwise() - mean.transpose();
    sum += centered.transpose() * centered / static_cast<double>(c.n());
  }
  return sum / static_cast<double>(mc.M());
}

struct MethodOutcome {
  CovEstimate est;
  long trunc = 0;
};

MethodOutcome run_method(Method m, const MultiChain& mc, const BatchConfig& bcfg,
                         MiseMode mode) {
  MethodOutcome out;
  const Chain& first = mc.chain(0);
  const auto t0 = clock_type::now();
  switch (m) {
    case Method::bm:
      out.est.sigma = batch_means_cov(first, bcfg);
      out.trunc = bcfg.b_n;
      break;
    case Method::gbm:
      out.est.sigma = gbm_cov(mc, bcfg);
      out.trunc = bcfg.b_n;
      break;
    case Method::sve:
      out.est.sigma = spectral_variance(first, bcfg.b_n);
      out.trunc = bcfg.b_n;
      break;
    case Method::mise: {
      const MiseResult r = mise(first, mode);
      out.est.sigma = r.sigma;
      out.est.diagnostics.trunc = {r.t_n};
      out.trunc = r.t_n;
      break;
    }
    case Method::cc_ise:
      out.est = cc_ise(first, bcfg);
      out.trunc = max_trunc(out.est.diagnostics.trunc);
      break;
    case Method::gcc_ise:
      out.est = gcc_ise(mc, bcfg);
      out.trunc = max_trunc(out.est.diagnostics.trunc);
      break;
    case Method::stan_cc:
      out.est = stan_cc(mc, bcfg);
      out.trunc = max_trunc(out.est.diagnostics.trunc);
      break;
  }
  out.est.method = m;
  out.est.diagnostics.wall_clock = seconds_since(t0);
  return out;
}

struct WorkOutput {
  std::vector<BenchmarkRow> rows;
  std::vector<BenchmarkError> errors;
};

WorkOutput run_replication(const BenchmarkConfig& cfg, const VarModel& model,
                           std::size_t ni, int rep) {
  const Eigen::Index n = cfg.n_grid[ni];
  const std::uint64_t rep_key = Rng::derive(cfg.seed, ni, static_cast<std::uint64_t>(rep));
  std::vector<Chain> chains;
  chains.reserve(cfg.chains);
  for (int m = 0; m < cfg.chains; ++m)
    chains.push_back(simulate_var(model, n, Rng::derive(rep_key, m)));
  const MultiChain mc(std::move(chains));

  const BatchConfig bcfg =
      cfg.batch_size > 0 ? batch_config(n, cfg.batch_size) : study_batch_size(n);
  const MeanVector zero = MeanVector::Zero(cfg.d);

  // Shared per-replication diagnostics inputs, computed once.
  const Eigen::MatrixXd zeta0_single = autocov_direct(mc.chain(0), 0).lags[0];
  const MeanVector mean_single = chain_mean(mc.chain(0));
  Eigen::MatrixXd zeta0_pooled;
  MeanVector mean_pooled;
  const bool any_pooled =
      std::any_of(cfg.methods.begin(), cfg.methods.end(), pooled_method);
  if (any_pooled) {
    zeta0_pooled = pooled_lag0(mc);
    mean_pooled = global_mean(mc);
  }

  WorkOutput out;
  for (Method method : cfg.methods) {
    BenchmarkRow row;
    row.method = method;
    row.n = n;
    row.rep = rep;
    try {
      const MethodOutcome mo = run_method(method, mc, bcfg, cfg.mise_mode);
      const bool pooled = pooled_method(method);
      const double n_eff =
          static_cast<double>(n) * (pooled ? static_cast<double>(mc.M()) : 1.0);
      const Eigen::MatrixXd& zeta0 = pooled ? zeta0_pooled : zeta0_single;
      const MeanVector& mean = pooled ? mean_pooled : mean_single;
      row.rel_frobenius = rel_frobenius(mo.est.sigma, model.sigma_true);
      row.ess_per_n = ess_from_parts(zeta0, mo.est.sigma, n_eff).ess_per_n;
      row.covered = ellipsoid_contains(mean, mo.est, n_eff, zero, cfg.level);
      row.trunc = mo.trunc;
      row.wall_clock = mo.est.diagnostics.wall_clock;
      out.rows.push_back(row);
    } catch (const std::exception& e) {
      out.errors.push_back({method, n, rep, e.what()});
    }
  }
  return out;
}

double quantile(std::vector<double> v, double p) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const double pos = p * static_cast<double>(v.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return v[lo] * (1.0 - frac) + v[hi] * frac;
}

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double sd_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

}  // namespace

BenchmarkReport run_benchmark(const BenchmarkConfig& cfg) {
  if (cfg.reps < 1) throw data_error("run_benchmark: reps must be positive");
  if (cfg.chains < 1) throw data_error("run_benchmark: chains must be positive");
  if (cfg.methods.empty()) throw data_error("run_benchmark: empty method list");
  for (Method m : cfg.methods)
    if (pooled_method(m) && m == Method::stan_cc && cfg.chains < 2)
      throw data_error("run_benchmark: stan-cc requires at least 2 chains");
  const VarModel model = build_var(cfg.d, cfg.rho);

  const std::size_t n_items = cfg.n_grid.size() * static_cast<std::size_t>(cfg.reps);
  std::vector<WorkOutput> outputs(n_items);
  const int threads = std::max(1, cfg.threads);
  if (threads == 1) {
    for (std::size_t item = 0; item < n_items; ++item) {
      const std::size_t ni = item / static_cast<std::size_t>(cfg.reps);
      const int rep = static_cast<int>(item % static_cast<std::size_t>(cfg.reps));
      outputs[item] = run_replication(cfg, model, ni, rep);
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t)
      pool.emplace_back([&] {
        for (std::size_t item = next.fetch_add(1); item < n_items;
             item = next.fetch_add(1)) {
          const std::size_t ni = item / static_cast<std::size_t>(cfg.reps);
          const int rep = static_cast<int>(item % static_cast<std::size_t>(cfg.reps));
          outputs[item] = run_replication(cfg, model, ni, rep);
        }
      });
    for (std::thread& t : pool) t.join();
  }

  BenchmarkReport report;
  report.config = cfg;
  for (WorkOutput& w : outputs) {
    report.rows.insert(report.rows.end(), w.rows.begin(), w.rows.end());
    report.errors.insert(report.errors.end(), w.errors.begin(), w.errors.end());
  }
  return report;
}

void write_csv(const BenchmarkReport& report, std::ostream& out) {
  out << "method,n,rep,rel_frobenius,ess_per_n,covered,trunc,wall_clock_s\n";
  out << std::setprecision(17);
  for (const BenchmarkRow& r : report.rows)
    out << method_name(r.method) << ',' << r.n << ',' << r.rep << ','
        << r.rel_frobenius << ',' << r.ess_per_n << ',' << (r.covered ? 1 : 0) << ','
        << r.trunc << ',' << r.wall_clock << '\n';
}

void write_json_summary(const BenchmarkReport& report, std::ostream& out) {
  nlohmann::json j;
  const BenchmarkConfig& cfg = report.config;
  std::vector<std::string> method_names;
  for (Method m : cfg.methods) method_names.push_back(method_name(m));
  j["config"] = {{"d", cfg.d},
                 {"rho", cfg.rho},
                 {"n_grid", cfg.n_grid},
                 {"reps", cfg.reps},
                 {"methods", method_names},
                 {"seed", cfg.seed},
                 {"chains", cfg.chains},
                 {"batch_size", cfg.batch_size},
                 {"level", cfg.level}};

  nlohmann::json groups = nlohmann::json::array();
  for (Eigen::Index n : cfg.n_grid)
    for (Method m : cfg.methods) {
      std::vector<double> rf, ess, wc, trunc;
      double covered = 0.0;
      for (const BenchmarkRow& r : report.rows)
        if (r.method == m && r.n == n) {
          rf.push_back(r.rel_frobenius);
          ess.push_back(r.ess_per_n);
          wc.push_back(r.wall_clock);
          trunc.push_back(static_cast<double>(r.trunc));
          covered += r.covered ? 1.0 : 0.0;
        }
      if (rf.empty()) continue;
      groups.push_back(
          {{"method", method_name(m)},
           {"n", n},
           {"count", rf.size()},
           {"coverage", covered / static_cast<double>(rf.size())},
           {"rel_frobenius",
            {{"mean", mean_of(rf)},
             {"sd", sd_of(rf)},
             {"q05", quantile(rf, 0.05)},
             {"q50", quantile(rf, 0.50)},
             {"q95", quantile(rf, 0.95)}}},
           {"ess_per_n", {{"mean", mean_of(ess)}, {"sd", sd_of(ess)}}},
           {"trunc", {{"q50", quantile(trunc, 0.50)}}},
           {"wall_clock_s", {{"mean", mean_of(wc)}}}});
    }
  j["summary"] = std::move(groups);

  nlohmann::json errs = nlohmann::json::array();
  for (const BenchmarkError& e : report.errors)
    errs.push_back({{"method", method_name(e.method)},
                    {"n", e.n},
                    {"rep", e.rep},
                    {"message", e.message}});
  j["errors"] = std::move(errs);
  out << j.dump(2) << '\n';
}

std::vector<BiasRow> bias_experiment(const BiasConfig& cfg) {
  if (cfg.reps < 1) throw data_error("bias_experiment: reps must be positive");
  std::vector<BiasRow> rows;
  for (std::size_t ri = 0; ri < cfg.rho_grid.size(); ++ri) {
    const double rho = cfg.rho_grid[ri];
    VarModel model;
    if (rho == 0.0) {
      // Independent-sequence row: phi = 0, so V = sigma_true = omega = I.
      model.d = cfg.d;
      model.rho = 0.0;
      model.phi = Eigen::MatrixXd::Zero(cfg.d, cfg.d);
      model.omega = Eigen::MatrixXd::Identity(cfg.d, cfg.d);
      model.v = model.omega;
      model.sigma_true = model.omega;
    } else {
      model = build_var(cfg.d, rho);
    }
    const Eigen::MatrixXd& truth = model.sigma_true;
    const int d = cfg.d;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        if (truth(i, j) == 0.0)
          throw numerical_error("bias_experiment: zero entry in the true covariance");
    const Eigen::VectorXd true_sd = truth.diagonal().cwiseSqrt();
    const double log_det_truth = linalg::ldlt_factor(truth).log_det();

    const BatchConfig bcfg =
        cfg.b_n > 0 ? batch_config(cfg.n, cfg.b_n) : default_batch_size(cfg.n);
    BiasRow row;
    row.rho = rho;
    for (int rep = 0; rep < cfg.reps; ++rep) {
      const Chain chain =
          simulate_var(model, cfg.n, Rng::derive(cfg.seed, ri, static_cast<std::uint64_t>(rep)));
      const Eigen::MatrixXd bm = batch_means_cov(chain, bcfg);
      const CovCorrPair pair = corr_from_cov(bm);
      const Eigen::MatrixXd corr_sigma =
          true_sd.asDiagonal() * pair.corr * true_sd.asDiagonal();

      double bias_cov = 0.0, bias_corr = 0.0;
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
          bias_cov += (bm(i, j) - truth(i, j)) / truth(i, j);
          bias_corr += (corr_sigma(i, j) - truth(i, j)) / truth(i, j);
        }
      const double dd = static_cast<double>(d) * static_cast<double>(d);
      row.cov_rel_bias += bias_cov / dd;
      row.corr_rel_bias += bias_corr / dd;

      const linalg::Ldlt f_bm = linalg::ldlt_factor(bm);
      const linalg::Ldlt f_corr = linalg::ldlt_factor(corr_sigma);
      if (!f_bm.pd || !f_corr.pd)
        throw numerical_error("bias_experiment: non-positive-definite estimate");
      row.cov_rel_det += std::exp((f_bm.log_det() - log_det_truth) / d);
      row.corr_rel_det += std::exp((f_corr.log_det() - log_det_truth) / d);
    }
    const double r = static_cast<double>(cfg.reps);
    row.cov_rel_bias /= r;
    row.corr_rel_bias /= r;
    row.cov_rel_det /= r;
    row.corr_rel_det /= r;
    rows.push_back(row);
  }
  return rows;
}

void write_bias_csv(const std::vector<BiasRow>& rows, std::ostream& out) {
  out << "rho,cov_rel_bias,corr_rel_bias,cov_rel_det,corr_rel_det\n";
  out << std::setprecision(17);
  for (const BiasRow& r : rows)
    out << r.rho << ',' << r.cov_rel_bias << ',' << r.corr_rel_bias << ','
        << r.cov_rel_det << ',' << r.corr_rel_det << '\n';
}

}  // namespace mcse
