#include "mcse/linalg.hpp"

#include <cmath>
#include <stdexcept>

namespace mcse::linalg {

long double Ldlt::det() const {
  long double p = 1.0L;
  for (Eigen::Index i = 0; i < pivots.size(); ++i) p *= static_cast<long double>(pivots(i));
  return p;
}

double Ldlt::log_det() const {
  double s = 0.0;
  for (Eigen::Index i = 0; i < pivots.size(); ++i) s += std::log(pivots(i));
  return s;
}

Eigen::VectorXd Ldlt::solve(const Eigen::VectorXd& b) const {
  const Eigen::Index d = pivots.size();
  Eigen::VectorXd y = b;
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index k = 0; k < i; ++k) y(i) -= L(i, k) * y(k);
  for (Eigen::Index i = 0; i < d; ++i) y(i) /= pivots(i);
  for (Eigen::Index i = d - 1; i >= 0; --i)
    for (Eigen::Index k = i + 1; k < d; ++k) y(i) -= L(k, i) * y(k);
  return y;
}

Ldlt ldlt_factor(const Eigen::MatrixXd& a) {
  const Eigen::Index d = a.rows();
  if (a.cols() != d) throw std::invalid_argument("ldlt_factor: matrix must be square");
  const double scale = a.cwiseAbs().maxCoeff();
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, scale))
    throw std::invalid_argument("ldlt_factor: matrix is not symmetric");

  const double tol = 1e-12 * std::max(1.0, a.diagonal().maxCoeff());
  Ldlt f;
  f.L = Eigen::MatrixXd::Identity(d, d);
  f.pivots = Eigen::VectorXd::Zero(d);
  f.pd = true;
  for (Eigen::Index j = 0; j < d; ++j) {
    double pivot = a(j, j);
    for (Eigen::Index k = 0; k < j; ++k) pivot -= f.L(j, k) * f.L(j, k) * f.pivots(k);
    f.pivots(j) = pivot;
    if (!(pivot > tol)) {
      f.pd = false;
      return f;
    }
    for (Eigen::Index i = j + 1; i < d; ++i) {
      double v = a(i, j);
      for (Eigen::Index k = 0; k < j; ++k) v -= f.L(i, k) * f.L(j, k) * f.pivots(k);
      f.L(i, j) = v / pivot;
    }
  }
  return f;
}

bool is_positive_definite(const Eigen::MatrixXd& a) { return ldlt_factor(a).pd; }

Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& a) {
  const Eigen::Index d = a.rows();
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    double pivot = a(j, j);
    for (Eigen::Index k = 0; k < j; ++k) pivot -= l(j, k) * l(j, k);
    pivot = std::max(pivot, 0.0);
    const double root = std::sqrt(pivot);
    l(j, j) = root;
    if (root > 0.0) {
      for (Eigen::Index i = j + 1; i < d; ++i) {
        double v = a(i, j);
        for (Eigen::Index k = 0; k < j; ++k) v -= l(i, k) * l(j, k);
        l(i, j) = v / root;
      }
    }
  }
  return l;
}

}  // namespace mcse::linalg
