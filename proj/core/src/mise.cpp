#include "mcse/mise.hpp"

#include <chrono>

#include "mcse/autocov.hpp"
#include "mcse/errors.hpp"
#include "mcse/linalg.hpp"

namespace mcse {

Eigen::MatrixXd sym_pair(const Eigen::MatrixXd& zeta_even, const Eigen::MatrixXd& zeta_odd) {
  if (zeta_even.rows() != zeta_odd.rows() || zeta_even.cols() != zeta_odd.cols() ||
      zeta_even.rows() != zeta_even.cols())
    throw std::invalid_argument("sym_pair: dimension mismatch");
  return ((zeta_even + zeta_even.transpose()) / 2.0 +
          (zeta_odd + zeta_odd.transpose()) / 2.0)
      .eval();
}

namespace {

// Lag matrices from the shared FFT kernel. Cached mode keeps the per-pair
// correlation arrays; sequential mode materializes 64-lag blocks and
// discards them. Entry arithmetic is identical in both modes, so the two
// schedules yield bitwise-identical matrices.
class LagStream {
 public:
  static constexpr long kBlock = 64;

  LagStream(const Chain& chain, bool cache_pairs)
      : n_(chain.n()),
        d_(chain.d()),
        cache_pairs_(cache_pairs),
        spectra_(detail::column_spectra(detail::centered_columns(chain, chain_mean(chain)))) {}

  Eigen::MatrixXd lag(long i) {
    if (i >= n_) return Eigen::MatrixXd::Zero(d_, d_);
    if (cache_pairs_) return assemble_from_cache(i);
    const long start = (i / kBlock) * kBlock;
    if (start != block_start_) load_block(start);
    return block_[static_cast<std::size_t>(i - start)];
  }

 private:
  std::size_t pair_index(Eigen::Index j, Eigen::Index k) const {
    // j <= k; row-major over the upper triangle
    return static_cast<std::size_t>(j * d_ - j * (j - 1) / 2 + (k - j));
  }

  Eigen::MatrixXd assemble_from_cache(long i) {
    if (pair_raw_.empty()) {
      pair_raw_.reserve(static_cast<std::size_t>(d_ * (d_ + 1) / 2));
      for (Eigen::Index j = 0; j < d_; ++j)
        for (Eigen::Index k = j; k < d_; ++k)
          pair_raw_.push_back(detail::pair_correlation(spectra_, j, k));
    }
    Eigen::MatrixXd z(d_, d_);
    const std::size_t m = spectra_.m;
    const auto idx = static_cast<std::size_t>(i);
    for (Eigen::Index j = 0; j < d_; ++j) {
      for (Eigen::Index k = j; k < d_; ++k) {
        const auto& raw = pair_raw_[pair_index(j, k)];
        z(j, k) = detail::zeta_entry(raw, idx, m, n_);
        if (k != j) z(k, j) = detail::zeta_entry(raw, (m - idx) % m, m, n_);
      }
    }
    return z;
  }

  void load_block(long start) {
    const std::size_t m = spectra_.m;
    block_.assign(kBlock, Eigen::MatrixXd::Zero(d_, d_));
    for (Eigen::Index j = 0; j < d_; ++j) {
      for (Eigen::Index k = j; k < d_; ++k) {
        const std::vector<double> raw = detail::pair_correlation(spectra_, j, k);
        for (long b = 0; b < kBlock; ++b) {
          const long i = start + b;
          if (i >= n_) break;
          const auto idx = static_cast<std::size_t>(i);
          auto& z = block_[static_cast<std::size_t>(b)];
          z(j, k) = detail::zeta_entry(raw, idx, m, n_);
          if (k != j) z(k, j) = detail::zeta_entry(raw, (m - idx) % m, m, n_);
        }
      }
    }
    block_start_ = start;
  }

  Eigen::Index n_;
  Eigen::Index d_;
  bool cache_pairs_;
  detail::ColumnSpectra spectra_;
  std::vector<std::vector<double>> pair_raw_;
  long block_start_ = -1;
  std::vector<Eigen::MatrixXd> block_;
};

}  // namespace

MiseResult mise(const Chain& chain, MiseMode mode) {
  if (chain.n() < 4) throw data_error("mise requires n >= 4");
  const auto start_time = std::chrono::steady_clock::now();
  const long n = static_cast<long>(chain.n());
  LagStream lags(chain, mode == MiseMode::fft);

  MiseResult res;
  const long phase1_max = (n - 1) / 2;
  const long budget = n / 2 - 1;

  Eigen::MatrixXd sigma = -lags.lag(0);
  linalg::Ldlt fact;
  long s_n = -1;
  for (long i = 0; i <= phase1_max; ++i) {
    sigma += 2.0 * sym_pair(lags.lag(2 * i), lags.lag(2 * i + 1));
    fact = linalg::ldlt_factor(sigma);
    if (fact.pd) {
      s_n = i;
      break;
    }
  }
  if (s_n < 0)
    throw numerical_error("mise: partial sums never became positive definite (degenerate chain)");
  res.s_n = s_n;

  long double prev_det = fact.det();
  res.log_dets.push_back(fact.log_det());
  bool terminated = false;
  for (long i = s_n + 1; i <= budget; ++i) {
    const Eigen::MatrixXd prev = sigma;
    sigma += 2.0 * sym_pair(lags.lag(2 * i), lags.lag(2 * i + 1));
    fact = linalg::ldlt_factor(sigma);
    // A non-pd update cannot have a larger pivot-product determinant.
    if (!fact.pd || !(fact.det() > prev_det)) {
      res.t_n = i - 1;
      res.sigma = prev;
      terminated = true;
      break;
    }
    prev_det = fact.det();
    res.log_dets.push_back(fact.log_det());
  }
  if (!terminated) {
    res.t_n = budget;
    res.sigma = sigma;
    res.budget_exhausted = true;
  }
  res.lags_consumed = 2 * res.t_n + 1;
  res.wall_clock =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start_time).count();
  return res;
}

}  // namespace mcse
