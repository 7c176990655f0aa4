#pragma once

#include <Eigen/Core>

#include "mcse/cc.hpp"
#include "mcse/chain.hpp"

namespace mcse {

struct EssValue {
  double ess = 0.0;
  double ess_per_n = 0.0;
};

/// Multivariate effective sample size n * (det zeta_0 / det sigma)^(1/d),
/// determinants taken in log space from the triangular factorization.
/// zeta_0 is the lag-0 sample autocovariance with divisor n.
EssValue ess(const Chain& chain, const CovEstimate& est);
EssValue ess_from_parts(const Eigen::MatrixXd& zeta0, const Eigen::MatrixXd& sigma,
                        double n);

/// ||truth - estimate||_F / ||truth||_F.
double rel_frobenius(const Eigen::MatrixXd& estimate, const Eigen::MatrixXd& truth);

/// p-quantile of the chi-square distribution, by bisection of the
/// regularized lower incomplete gamma function (absolute tolerance 1e-8).
double chi2_quantile(int dof, double p);

/// Regularized lower incomplete gamma P(a, x) (exposed for oracle tests).
double gamma_p(double a, double x);

/// Membership of mu0 in the level-`level` confidence ellipsoid around
/// `mean`; the quadratic form is evaluated via triangular solve.
bool ellipsoid_contains(const MeanVector& mean, const CovEstimate& est, double n,
                        const MeanVector& mu0, double level);

}  // namespace mcse
