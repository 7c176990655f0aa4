#include "mcse/diagnostics.hpp"

#include <cmath>
#include <limits>

#include "mcse/autocov.hpp"
#include "mcse/errors.hpp"
#include "mcse/linalg.hpp"

namespace mcse {

EssValue ess_from_parts(const Eigen::MatrixXd& zeta0, const Eigen::MatrixXd& sigma, double n) {
  const linalg::Ldlt fz = linalg::ldlt_factor(zeta0);
  const linalg::Ldlt fs = linalg::ldlt_factor(sigma);
  if (!fs.pd) throw numerical_error("ess: covariance estimate is singular");
  if (!fz.pd) throw numerical_error("ess: lag-0 sample covariance is singular");
  const double d = static_cast<double>(sigma.rows());
  EssValue v;
  v.ess = n * std::exp((fz.log_det() - fs.log_det()) / d);
  v.ess_per_n = v.ess / n;
  return v;
}

EssValue ess(const Chain& chain, const CovEstimate& est) {
  if (est.sigma.rows() != chain.d()) throw std::invalid_argument("ess: dimension mismatch");
  const Eigen::MatrixXd zeta0 = autocov_direct(chain, 0).lags[0];
  return ess_from_parts(zeta0, est.sigma, static_cast<double>(chain.n()));
}

double rel_frobenius(const Eigen::MatrixXd& estimate, const Eigen::MatrixXd& truth) {
  const double denom = truth.norm();
  if (denom == 0.0) throw numerical_error("rel_frobenius: zero truth matrix");
  return (truth - estimate).norm() / denom;
}

namespace {

// Regularized lower incomplete gamma, series for x < a+1 and continued
// fraction otherwise.
double gamma_p_impl(double a, double x) {
  if (x <= 0.0) return 0.0;
  const double lg = std::lgamma(a);
  if (x < a + 1.0) {
    double term = 1.0 / a;
    double sum = term;
    double ap = a;
    for (int i = 0; i < 500; ++i) {
      ap += 1.0;
      term *= x / ap;
      sum += term;
      if (std::abs(term) < std::abs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - lg);
  }
  // Lentz continued fraction for Q(a, x)
  const double tiny = std::numeric_limits<double>::min() / 1e-30;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 500; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  const double q = std::exp(-x + a * std::log(x) - lg) * h;
  return 1.0 - q;
}

}  // namespace

double gamma_p(double a, double x) { return gamma_p_impl(a, x); }

double chi2_quantile(int dof, double p) {
  if (dof < 1) throw data_error("chi2_quantile: dof must be positive");
  if (!(p > 0.0 && p < 1.0)) throw data_error("chi2_quantile: p must be in (0, 1)");
  const double a = static_cast<double>(dof) / 2.0;
  double lo = 0.0;
  double hi = std::max(8.0, static_cast<double>(dof) * 4.0);
  while (gamma_p_impl(a, hi / 2.0) < p) hi *= 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (gamma_p_impl(a, mid / 2.0) < p)
      lo = mid;
    else
      hi = mid;
    if (hi - lo < 1e-10) break;
  }
  return 0.5 * (lo + hi);
}

bool ellipsoid_contains(const MeanVector& mean, const CovEstimate& est, double n,
                        const MeanVector& mu0, double level) {
  const linalg::Ldlt f = linalg::ldlt_factor(est.sigma);
  if (!f.pd) throw numerical_error("ellipsoid_contains: covariance estimate is singular");
  const Eigen::VectorXd diff = mean - mu0;
  const double statistic = n * diff.dot(f.solve(diff));
  return statistic < chi2_quantile(static_cast<int>(est.sigma.rows()), level);
}

}  // namespace mcse
