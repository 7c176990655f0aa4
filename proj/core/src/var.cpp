#include "mcse/var.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <string>

#include "mcse/errors.hpp"
#include "mcse/linalg.hpp"
#include "mcse/rng.hpp"

namespace mcse {

namespace {

bool is_prime(int q) {
  if (q < 2) return false;
  for (int i = 2; i * i <= q; ++i)
    if (q % i == 0) return false;
  return true;
}

// Legendre symbol chi(a) for prime q.
int legendre(int a, int q) {
  a %= q;
  if (a < 0) a += q;
  if (a == 0) return 0;
  // Euler's criterion by repeated squaring.
  int result = 1;
  long long base = a;
  int exp = (q - 1) / 2;
  base %= q;
  while (exp > 0) {
    if (exp & 1) result = static_cast<int>((result * base) % q);
    base = (base * base) % q;
    exp >>= 1;
  }
  return result == q - 1 ? -1 : result;
}

bool try_hadamard(int order, Eigen::MatrixXi& out) {
  if (order == 1) {
    out = Eigen::MatrixXi::Ones(1, 1);
    return true;
  }
  if (order == 2) {
    out.resize(2, 2);
    out << 1, 1, 1, -1;
    return true;
  }
  if (order % 2 == 0) {
    Eigen::MatrixXi half;
    if (try_hadamard(order / 2, half)) {
      const int h = order / 2;
      out.resize(order, order);
      out.topLeftCorner(h, h) = half;
      out.topRightCorner(h, h) = half;
      out.bottomLeftCorner(h, h) = half;
      out.bottomRightCorner(h, h) = -half;
      return true;
    }
  }
  const int q = order - 1;
  if (order % 4 == 0 && is_prime(q) && q % 4 == 3) {
    // Paley type I: H = I + C with C the skew conference matrix built from
    // the Jacobsthal matrix of GF(q).
    Eigen::MatrixXi c = Eigen::MatrixXi::Zero(order, order);
    for (int j = 1; j < order; ++j) {
      c(0, j) = 1;
      c(j, 0) = -1;
    }
    for (int i = 1; i < order; ++i)
      for (int j = 1; j < order; ++j) c(i, j) = legendre((j - 1) - (i - 1), q);
    out = c + Eigen::MatrixXi::Identity(order, order);
    return true;
  }
  return false;
}

}  // namespace

Eigen::MatrixXi hadamard(int order) {
  Eigen::MatrixXi h;
  if (order < 1 || !try_hadamard(order, h))
    throw data_error("no Hadamard construction for order " + std::to_string(order));
  return h;
}

Eigen::MatrixXd stationary_v(const Eigen::MatrixXd& phi, const Eigen::MatrixXd& omega) {
  const Eigen::Index d = phi.rows();
  const double radius = phi.eigenvalues().cwiseAbs().maxCoeff();
  if (!(radius < 1.0))
    throw numerical_error("nonstationary VAR: spectral radius " + std::to_string(radius));

  Eigen::MatrixXd k = Eigen::MatrixXd::Identity(d * d, d * d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) k.block(i * d, j * d, d, d) -= phi(i, j) * phi;
  const Eigen::VectorXd rhs = Eigen::Map<const Eigen::VectorXd>(omega.data(), d * d);
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(k);
  const Eigen::VectorXd vec_v = lu.solve(rhs);
  Eigen::MatrixXd v = Eigen::Map<const Eigen::MatrixXd>(vec_v.data(), d, d);
  return ((v + v.transpose()) / 2.0).eval();
}

VarModel build_var(int d, double rho) {
  if (!(rho > 1.0)) throw data_error("build_var requires rho > 1");
  VarModel m;
  m.d = d;
  m.rho = rho;
  const Eigen::MatrixXd h = hadamard(d).cast<double>();
  Eigen::VectorXd eig(d);
  for (int k = 0; k < d; ++k) eig(k) = std::pow(rho, -(k + 1));
  m.phi = (h * eig.asDiagonal() * h.transpose()) / static_cast<double>(d);
  m.omega = Eigen::MatrixXd::Identity(d, d);
  m.v = stationary_v(m.phi, m.omega);
  const Eigen::MatrixXd a = Eigen::MatrixXd::Identity(d, d) - m.phi;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
  const Eigen::MatrixXd x = lu.solve(m.v);  // (I-phi)^-1 V
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_t(a.transpose());
  const Eigen::MatrixXd z = lu_t.solve(m.v.transpose()).transpose();  // V (I-phi)^-1
  const Eigen::MatrixXd sigma = x + z - m.v;
  m.sigma_true = (sigma + sigma.transpose()) / 2.0;
  return m;
}

Chain simulate_var(const VarModel& model, Eigen::Index n, std::uint64_t key,
                   Eigen::Index warmup) {
  if (n < 2) throw data_error("simulate_var requires n >= 2");
  const Eigen::Index d = model.d;
  Rng rng(key);
  const Eigen::MatrixXd root = linalg::psd_sqrt(model.v);
  Eigen::VectorXd z(d);
  for (Eigen::Index j = 0; j < d; ++j) z(j) = rng.next_normal();
  Eigen::VectorXd x = root * z;
  for (Eigen::Index t = 0; t < warmup; ++t) {
    for (Eigen::Index j = 0; j < d; ++j) z(j) = rng.next_normal();
    x = model.phi * x + z;
  }
  Eigen::MatrixXd samples(n, d);
  for (Eigen::Index t = 0; t < n; ++t) {
    for (Eigen::Index j = 0; j < d; ++j) z(j) = rng.next_normal();
    x = model.phi * x + z;
    samples.row(t) = x.transpose();
  }
  return Chain(std::move(samples));
}

}  // namespace mcse
