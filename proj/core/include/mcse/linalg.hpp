#pragma once

#include <Eigen/Core>

namespace mcse::linalg {

/// Unpivoted LDL^T factorization of a symmetric matrix. Pivots are the
/// entries of D; the factorization "succeeds" (pd == true) when every pivot
/// exceeds 1e-12 * max(1, max diagonal entry of the input). Determinants are
/// taken from the pivot product, never by cofactor expansion.
struct Ldlt {
  bool pd = false;
  Eigen::MatrixXd L;       // unit lower triangular
  Eigen::VectorXd pivots;  // diagonal of D (valid entries up to the failure point)

  /// Product of pivots in extended precision; only meaningful when pd.
  long double det() const;
  /// Sum of log pivots; only meaningful when pd.
  double log_det() const;
  /// Solve A x = b using the factors; only valid when pd.
  Eigen::VectorXd solve(const Eigen::VectorXd& b) const;
};

/// Factor a symmetric matrix. Asymmetric input (relative mismatch above
/// 1e-12) throws std::invalid_argument.
Ldlt ldlt_factor(const Eigen::MatrixXd& a);

/// True iff the symmetric factorization completes with every pivot above the
/// tolerance described on Ldlt.
bool is_positive_definite(const Eigen::MatrixXd& a);

/// Lower Cholesky factor of a positive semi-definite matrix (for sampling);
/// tiny negative pivots are clamped to zero.
Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& a);

}  // namespace mcse::linalg
