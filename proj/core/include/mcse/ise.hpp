#pragma once

#include <Eigen/Core>
#include <vector>

#include "mcse/autocov.hpp"
#include "mcse/chain.hpp"

namespace mcse {

/// Result of the univariate initial positive sequence rule.
/// k_n = -1 encodes the degenerate fallback (first pair not positive), in
/// which case sigma2 is the lag-0 variance.
struct IseResult {
  double sigma2 = 0.0;
  long k_n = -1;
  std::vector<double> pairs_used;  // the Gamma values actually summed
};

enum class SdSource { ise, g_ise, stan_ise };

/// Diagonal matrix of marginal standard deviations, one ISE per coordinate.
struct DiagonalSD {
  Eigen::VectorXd sds;
  Eigen::VectorXd variances;  // squared sds before the sqrt round-trip
  std::vector<long> k_n;
  SdSource source = SdSource::ise;
};

/// Geyer's positive initial sequence estimator applied to a univariate
/// autocovariance sequence: sum pairs Gamma_i = gamma_{2i} + gamma_{2i+1}
/// while they stay positive (a missing odd partner at the end counts as 0).
IseResult ise_from_autocov(const AutocovSequence& gamma);

/// ISE on a d = 1 chain via FFT autocovariances at all lags.
IseResult ise_variance(const Chain& chain);

DiagonalSD ise_diagonal(const Chain& chain);
DiagonalSD g_ise_diagonal(const MultiChain& mc);
DiagonalSD stan_ise_diagonal(const MultiChain& mc);

}  // namespace mcse
