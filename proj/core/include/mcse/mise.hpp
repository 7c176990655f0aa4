#pragma once

#include <Eigen/Core>
#include <vector>

#include "mcse/chain.hpp"

namespace mcse {

/// Lag-matrix scheduling for the multivariate initial sequence estimator.
/// Both modes consume bitwise-identical FFT autocovariances and return
/// identical results; they differ in memory profile only:
///   sequential - lag matrices are materialized in blocks of 64 and
///                discarded after use (memory O(d n + 64 d^2));
///   fft        - per-pair correlation arrays are cached for the whole run
///                (memory O(d^2 n), fastest for repeated passes).
enum class MiseMode { sequential, fft };

struct MiseResult {
  Eigen::MatrixXd sigma;
  long s_n = 0;              // first index where the partial sum is positive definite
  long t_n = 0;              // truncation time
  long lags_consumed = 0;    // 2 t_n + 1 when terminated by the determinant rule
  bool budget_exhausted = false;
  double wall_clock = 0.0;   // seconds
  std::vector<double> log_dets;  // det trace along phase 2, for rule replay
};

/// Z_i = (zeta_{2i} + zeta_{2i}^T)/2 + (zeta_{2i+1} + zeta_{2i+1}^T)/2.
Eigen::MatrixXd sym_pair(const Eigen::MatrixXd& zeta_even, const Eigen::MatrixXd& zeta_odd);

/// Dai-Jones multivariate initial sequence estimator. Phase 1 accumulates
/// -zeta_0 + 2 sum Z_i until positive definite (s_n); phase 2 keeps adding
/// 2 Z_i while the determinant strictly increases. Budget exhaustion (no
/// decrease before lag floor(n/2 - 1)) is reported via flag, not error.
MiseResult mise(const Chain& chain, MiseMode mode);

}  // namespace mcse
