#pragma once

#include <Eigen/Core>
#include <iosfwd>
#include <string>
#include <vector>

namespace mcse {

using MeanVector = Eigen::VectorXd;

/// One Markov chain run: an n x d matrix of function evaluations g(X_t),
/// rows in time order. Immutable after construction.
class Chain {
 public:
  /// Validates n >= 2, d >= 1 and finiteness of every entry.
  explicit Chain(Eigen::MatrixXd samples);

  Eigen::Index n() const { return samples_.rows(); }
  Eigen::Index d() const { return samples_.cols(); }
  const Eigen::MatrixXd& samples() const { return samples_; }

  /// Single coordinate as a univariate chain.
  Chain coordinate(Eigen::Index j) const { return Chain(samples_.col(j)); }

  /// First `rows` samples (used to align batch-means and ISE windows).
  Chain head(Eigen::Index rows) const { return Chain(samples_.topRows(rows)); }

 private:
  Eigen::MatrixXd samples_;
};

/// M equal-length chains from the same kernel.
class MultiChain {
 public:
  /// Validates M >= 1 and identical (n, d) across chains.
  explicit MultiChain(std::vector<Chain> chains);

  std::size_t M() const { return chains_.size(); }
  Eigen::Index n() const { return chains_.front().n(); }
  Eigen::Index d() const { return chains_.front().d(); }
  const Chain& chain(std::size_t m) const { return chains_[m]; }
  const std::vector<Chain>& chains() const { return chains_; }

 private:
  std::vector<Chain> chains_;
};

/// Parses CSV text (comma-separated, optional single header row, one row per
/// time step). Throws data_error on ragged rows, non-numeric cells (with
/// row/column position) or fewer than two data rows.
Chain load_chain(std::istream& in, bool has_header);
Chain load_chain_file(const std::string& path, bool has_header);

/// Coordinate-wise mean of the rows, accumulated with pairwise summation.
MeanVector chain_mean(const Chain& chain);

/// Mean of the per-chain means. With M = 1 this is bit-identical to
/// chain_mean of the single chain.
MeanVector global_mean(const MultiChain& mc);

namespace detail {
/// Pairwise (cascade) summation; deterministic and accurate for long runs.
double pairwise_sum(const double* x, std::size_t n);
}  // namespace detail

}  // namespace mcse
