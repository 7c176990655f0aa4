#pragma once

#include <Eigen/Core>
#include <map>
#include <string>
#include <vector>

#include "mcse/batch.hpp"
#include "mcse/chain.hpp"
#include "mcse/ise.hpp"

namespace mcse {

enum class Method { cc_ise, gcc_ise, stan_cc, mise, bm, sve, gbm };

std::string method_name(Method m);
Method method_from_name(const std::string& name);

/// A symmetric estimate of the asymptotic covariance with method tag and
/// per-stage diagnostics.
struct CovEstimate {
  Eigen::MatrixXd sigma;
  Method method = Method::cc_ise;
  struct Diagnostics {
    std::vector<long> trunc;  // t_n (mise) or per-coordinate k_n (ISE families)
    Eigen::Index b_n = 0;
    double wall_clock = 0.0;
    std::map<std::string, double> stage_seconds;  // bm / corr / marginal_sd / assembly
  } diagnostics;
};

/// L_ISE * R_BM * L_ISE. Batch means and the marginal ISEs run on the same
/// retained-sample window; diagonal entries carry the ISE variances exactly.
CovEstimate cc_ise(const Chain& chain, const BatchConfig& cfg);

/// Globally-centered variant; bit-identical to cc_ise at M = 1.
CovEstimate gcc_ise(const MultiChain& mc, const BatchConfig& cfg);

/// STAN-adjusted marginal SDs with the globally-centered correlation.
CovEstimate stan_cc(const MultiChain& mc, const BatchConfig& cfg);

}  // namespace mcse
