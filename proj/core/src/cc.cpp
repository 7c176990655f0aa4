#include "mcse/cc.hpp"

#include <chrono>
#include <stdexcept>

#include "mcse/errors.hpp"

namespace mcse {

std::string method_name(Method m) {
  switch (m) {
    case Method::cc_ise: return "cc-ise";
    case Method::gcc_ise: return "gcc-ise";
    case Method::stan_cc: return "stan-cc";
    case Method::mise: return "mise";
    case Method::bm: return "bm";
    case Method::sve: return "sve";
    case Method::gbm: return "gbm";
  }
  throw std::logic_error("unreachable");
}

Method method_from_name(const std::string& name) {
  if (name == "cc-ise") return Method::cc_ise;
  if (name == "gcc-ise") return Method::gcc_ise;
  if (name == "stan-cc") return Method::stan_cc;
  if (name == "mise") return Method::mise;
  if (name == "bm") return Method::bm;
  if (name == "sve") return Method::sve;
  if (name == "gbm") return Method::gbm;
  throw data_error("unknown method: '" + name + "'");
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// sigma = L R L assembled so the diagonal carries the marginal ISE variances
// exactly (no sqrt round-trip on the diagonal).
Eigen::MatrixXd assemble(const DiagonalSD& sd, const Eigen::MatrixXd& corr) {
  const Eigen::Index d = sd.sds.size();
  Eigen::MatrixXd sigma(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    sigma(i, i) = sd.variances(i);
    for (Eigen::Index j = i + 1; j < d; ++j) {
      const double v = sd.sds(i) * corr(i, j) * sd.sds(j);
      sigma(i, j) = v;
      sigma(j, i) = v;
    }
  }
  return sigma;
}

CovEstimate cc_family(const MultiChain& retained, const BatchConfig& cfg, Method method) {
  const auto t0 = Clock::now();
  CovEstimate est;
  est.method = method;
  est.diagnostics.b_n = cfg.b_n;

  auto stage = Clock::now();
  const Eigen::MatrixXd bm = gbm_cov(retained, cfg);
  est.diagnostics.stage_seconds["bm"] = seconds_since(stage);

  stage = Clock::now();
  const CovCorrPair pair = corr_from_cov(bm);
  est.diagnostics.stage_seconds["corr"] = seconds_since(stage);

  stage = Clock::now();
  DiagonalSD sd;
  switch (method) {
    case Method::cc_ise:
      sd = ise_diagonal(retained.chain(0));
      break;
    case Method::gcc_ise:
      sd = g_ise_diagonal(retained);
      break;
    case Method::stan_cc:
      sd = stan_ise_diagonal(retained);
      break;
    default:
      throw std::logic_error("cc_family: not a cc-family method");
  }
  est.diagnostics.stage_seconds["marginal_sd"] = seconds_since(stage);

  stage = Clock::now();
  est.sigma = assemble(sd, pair.corr);
  est.diagnostics.stage_seconds["assembly"] = seconds_since(stage);

  est.diagnostics.trunc = sd.k_n;
  est.diagnostics.wall_clock = seconds_since(t0);
  return est;
}

// Both factors consume exactly the retained-sample window.
MultiChain retained_window(const MultiChain& mc, const BatchConfig& cfg) {
  std::vector<Chain> trimmed;
  trimmed.reserve(mc.M());
  for (std::size_t m = 0; m < mc.M(); ++m) trimmed.push_back(mc.chain(m).head(cfg.retained()));
  return MultiChain(std::move(trimmed));
}

}  // namespace

CovEstimate cc_ise(const Chain& chain, const BatchConfig& cfg) {
  return cc_family(retained_window(MultiChain({chain}), cfg), cfg, Method::cc_ise);
}

CovEstimate gcc_ise(const MultiChain& mc, const BatchConfig& cfg) {
  return cc_family(retained_window(mc, cfg), cfg, Method::gcc_ise);
}

CovEstimate stan_cc(const MultiChain& mc, const BatchConfig& cfg) {
  if (mc.M() < 2) throw data_error("stan-cc requires at least 2 chains");
  return cc_family(retained_window(mc, cfg), cfg, Method::stan_cc);
}

}  // namespace mcse
