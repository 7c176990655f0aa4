#pragma once

#include <Eigen/Core>
#include <complex>
#include <vector>

#include "mcse/chain.hpp"

namespace mcse {

enum class Centering { single_chain, global, stan };

/// Lag-indexed sample autocovariance matrices (1x1 when d = 1). The divisor
/// is n at every lag. Only i >= 0 is stored; the lag -i matrix is the
/// transpose of lag i.
struct AutocovSequence {
  std::vector<Eigen::MatrixXd> lags;
  Eigen::Index n = 0;
  Eigen::Index d = 0;
  Centering centering = Centering::single_chain;

  Eigen::Index max_lag() const { return static_cast<Eigen::Index>(lags.size()) - 1; }
  double scalar(std::size_t i) const { return lags[i](0, 0); }
};

/// Direct-formula autocovariances: zeta_i = n^-1 sum_t (g_t - mean)(g_{t+i} - mean)^T.
AutocovSequence autocov_direct(const Chain& chain, Eigen::Index max_lag);

/// Same contract as autocov_direct (within 1e-8 relative), computed via
/// zero-padded circular cross-correlation; pad length is the smallest power
/// of two >= 2n. Cost O(d^2 n log n).
AutocovSequence autocov_fft(const Chain& chain, Eigen::Index max_lag);

/// Globally-centered autocovariances for parallel chains: every chain is
/// centered at the grand mean and the per-chain sequences are averaged.
/// With M = 1 this is bit-identical to autocov_fft.
AutocovSequence autocov_global(const MultiChain& mc, Eigen::Index max_lag);

/// Per-chain variances (divisor n-1), their within-chain average W and the
/// between-chain variance B, per coordinate.
struct WithinBetween {
  Eigen::VectorXd within;         // W-hat, length d
  Eigen::VectorXd between;        // B-hat, length d
  Eigen::MatrixXd per_chain_var;  // M x d matrix of s_m^2
};

WithinBetween within_between(const MultiChain& mc);

/// STAN-adjusted autocovariances: (B - W)/n added to the average of own-mean
/// centered per-chain sequences. d > 1 is handled coordinate-wise on the
/// diagonal (the sequence only feeds univariate ISEs).
AutocovSequence autocov_stan(const MultiChain& mc, Eigen::Index max_lag);

namespace detail {

/// Forward spectra of the zero-padded columns of a centered sample matrix.
/// Shared by every FFT-based autocovariance consumer so that all paths see
/// bitwise-identical values.
struct ColumnSpectra {
  std::size_t m = 0;  // pad length
  Eigen::Index n = 0;
  std::vector<std::vector<std::complex<double>>> cols;
};

ColumnSpectra column_spectra(const Eigen::MatrixXd& centered);

/// Full circular cross-correlation r of columns (j, k): r[i] = sum_t
/// a_j(t) a_k(t+i) * m for 0 <= i <= n-1 and r[m-i] the reflected pair.
/// Unnormalized; entries become zeta values via zeta_entry.
std::vector<double> pair_correlation(const ColumnSpectra& s, Eigen::Index j, Eigen::Index k);

inline double zeta_entry(const std::vector<double>& raw, std::size_t idx, std::size_t m,
                         Eigen::Index n) {
  return raw[idx] / static_cast<double>(m) / static_cast<double>(n);
}

Eigen::MatrixXd centered_columns(const Chain& chain, const MeanVector& mean);

}  // namespace detail

}  // namespace mcse
