#pragma once

#include <Eigen/Core>

#include "mcse/chain.hpp"

namespace mcse {

/// Non-overlapping batch layout: n = a_n * b_n + dropped, dropped < b_n.
struct BatchConfig {
  Eigen::Index b_n = 0;     // batch size
  Eigen::Index a_n = 0;     // number of batches
  Eigen::Index dropped = 0; // trailing samples discarded

  Eigen::Index retained() const { return a_n * b_n; }
};

/// b_n = floor(n^(1/3)), a_n = floor(n / b_n). Requires n >= 8.
BatchConfig default_batch_size(Eigen::Index n);

/// Explicit batch size; validates a_n >= 2.
BatchConfig batch_config(Eigen::Index n, Eigen::Index b_n);

/// Batch-means estimator b_n/(a_n - 1) sum_k (gtilde_k - gbar)(gtilde_k - gbar)^T
/// over the first a_n * b_n samples.
Eigen::MatrixXd batch_means_cov(const Chain& chain, const BatchConfig& cfg);

/// Globally-centered pooled batch means: batch means of every chain centered
/// at the grand mean, divisor M * a_n - 1. Identical to batch_means_cov at M = 1.
Eigen::MatrixXd gbm_cov(const MultiChain& mc, const BatchConfig& cfg);

/// Covariance with its correlation factorization cov = L * corr * L.
struct CovCorrPair {
  Eigen::MatrixXd cov;
  Eigen::MatrixXd corr;  // unit diagonal, exactly
  Eigen::VectorXd sd;
};

/// Throws numerical_error naming the coordinate if any diagonal entry <= 0.
CovCorrPair corr_from_cov(const Eigen::MatrixXd& cov);

/// Modified-Bartlett spectral variance estimator:
/// sum_{|k| <= bandwidth} (1 - |k|/(bandwidth+1)) zeta_k, symmetrized.
Eigen::MatrixXd spectral_variance(const Chain& chain, Eigen::Index bandwidth);

}  // namespace mcse
