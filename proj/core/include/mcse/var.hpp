#pragma once

#include <Eigen/Core>
#include <cstdint>

#include "mcse/chain.hpp"

namespace mcse {

/// Hadamard matrix with +-1 entries and H H^T = order * I, exact in integer
/// arithmetic. Powers of two use Sylvester doubling; other admissible orders
/// (e.g. 12) use the Paley type-I construction on the prime order-1.
Eigen::MatrixXi hadamard(int order);

/// Stationary reversible VAR(1) benchmark model with known asymptotic
/// covariance.
struct VarModel {
  Eigen::MatrixXd phi;         // symmetric, eigenvalues rho^-1 .. rho^-d
  Eigen::MatrixXd omega;       // innovation covariance (identity)
  Eigen::MatrixXd v;           // stationary covariance, V = phi V phi^T + omega
  Eigen::MatrixXd sigma_true;  // (I-phi)^-1 V + V (I-phi)^-1 - V
  double rho = 0.0;
  int d = 0;
};

/// phi = d^-1 H_d diag(rho^-1, ..., rho^-d) H_d^T, omega = I.
VarModel build_var(int d, double rho);

/// Unique solution of V = phi V phi^T + omega via the d^2 x d^2 linear
/// system (I - phi (x) phi) vec(V) = vec(omega); output symmetrized.
Eigen::MatrixXd stationary_v(const Eigen::MatrixXd& phi, const Eigen::MatrixXd& omega);

/// Simulate n steps with X_0 drawn from the stationary law N(0, V);
/// identical (model, n, key) gives a bit-identical chain. `warmup` extra
/// steps are discarded before recording (0 with the stationary start).
Chain simulate_var(const VarModel& model, Eigen::Index n, std::uint64_t key,
                   Eigen::Index warmup = 0);

}  // namespace mcse
