#include "mcse/autocov.hpp"

#include <cmath>

#include "mcse/errors.hpp"
#include "mcse/fft.hpp"

namespace mcse {

namespace detail {

Eigen::MatrixXd centered_columns(const Chain& chain, const MeanVector& mean) {
  return chain.samples().rowwise() - mean.transpose();
}

ColumnSpectra column_spectra(const Eigen::MatrixXd& centered) {
  ColumnSpectra s;
  s.n = centered.rows();
  s.m = fft::pad_length(static_cast<std::size_t>(s.n));
  s.cols.reserve(static_cast<std::size_t>(centered.cols()));
  std::vector<double> padded(s.m, 0.0);
  for (Eigen::Index j = 0; j < centered.cols(); ++j) {
    std::fill(padded.begin(), padded.end(), 0.0);
    for (Eigen::Index t = 0; t < s.n; ++t) padded[static_cast<std::size_t>(t)] = centered(t, j);
    s.cols.push_back(fft::forward(padded));
  }
  return s;
}

std::vector<double> pair_correlation(const ColumnSpectra& s, Eigen::Index j, Eigen::Index k) {
  const auto& a = s.cols[static_cast<std::size_t>(j)];
  const auto& b = s.cols[static_cast<std::size_t>(k)];
  std::vector<std::complex<double>> prod(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) prod[i] = std::conj(a[i]) * b[i];
  return fft::inverse(prod, s.m);
}

}  // namespace detail

namespace {

void check_lag_range(const Chain& chain, Eigen::Index max_lag) {
  if (max_lag < 0 || max_lag >= chain.n())
    throw data_error("max_lag out of range: need 0 <= max_lag <= n-1");
}

// FFT autocovariances centered at a caller-supplied mean; the shared kernel
// behind autocov_fft, autocov_global and the mise lag streams.
AutocovSequence autocov_fft_with_mean(const Chain& chain, const MeanVector& mean,
                                      Eigen::Index max_lag) {
  const Eigen::Index n = chain.n();
  const Eigen::Index d = chain.d();
  const Eigen::MatrixXd centered = detail::centered_columns(chain, mean);
  const detail::ColumnSpectra spectra = detail::column_spectra(centered);
  const std::size_t m = spectra.m;

  AutocovSequence seq;
  seq.n = n;
  seq.d = d;
  seq.lags.assign(static_cast<std::size_t>(max_lag) + 1, Eigen::MatrixXd::Zero(d, d));
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index k = j; k < d; ++k) {
      const std::vector<double> raw = detail::pair_correlation(spectra, j, k);
      for (Eigen::Index i = 0; i <= max_lag; ++i) {
        auto& z = seq.lags[static_cast<std::size_t>(i)];
        z(j, k) = detail::zeta_entry(raw, static_cast<std::size_t>(i), m, n);
        if (k != j)
          z(k, j) = detail::zeta_entry(raw, (m - static_cast<std::size_t>(i)) % m, m, n);
      }
    }
  }
  return seq;
}

}  // namespace

AutocovSequence autocov_direct(const Chain& chain, Eigen::Index max_lag) {
  check_lag_range(chain, max_lag);
  const Eigen::Index n = chain.n();
  const Eigen::Index d = chain.d();
  const Eigen::MatrixXd dev = detail::centered_columns(chain, chain_mean(chain));
  AutocovSequence seq;
  seq.n = n;
  seq.d = d;
  seq.lags.reserve(static_cast<std::size_t>(max_lag) + 1);
  for (Eigen::Index i = 0; i <= max_lag; ++i) {
    const Eigen::Index rows = n - i;
    seq.lags.push_back((dev.topRows(rows).transpose() * dev.bottomRows(rows)) /
                       static_cast<double>(n));
  }
  return seq;
}

AutocovSequence autocov_fft(const Chain& chain, Eigen::Index max_lag) {
  check_lag_range(chain, max_lag);
  return autocov_fft_with_mean(chain, chain_mean(chain), max_lag);
}

AutocovSequence autocov_global(const MultiChain& mc, Eigen::Index max_lag) {
  if (max_lag < 0 || max_lag >= mc.n())
    throw data_error("max_lag out of range: need 0 <= max_lag <= n-1");
  const MeanVector grand = global_mean(mc);
  AutocovSequence acc;
  for (std::size_t m = 0; m < mc.M(); ++m) {
    AutocovSequence per = autocov_fft_with_mean(mc.chain(m), grand, max_lag);
    if (m == 0) {
      acc = std::move(per);
    } else {
      for (std::size_t i = 0; i < acc.lags.size(); ++i) acc.lags[i] += per.lags[i];
    }
  }
  const double M = static_cast<double>(mc.M());
  for (auto& z : acc.lags) z /= M;
  acc.centering = Centering::global;
  return acc;
}

WithinBetween within_between(const MultiChain& mc) {
  if (mc.M() < 2) throw data_error("within_between requires at least 2 chains");
  if (mc.n() < 2) throw data_error("within_between requires chains of length >= 2");
  const Eigen::Index d = mc.d();
  const Eigen::Index n = mc.n();
  const std::size_t M = mc.M();

  WithinBetween wb;
  wb.per_chain_var = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(M), d);
  Eigen::MatrixXd means(static_cast<Eigen::Index>(M), d);
  for (std::size_t m = 0; m < M; ++m) {
    const MeanVector mu = chain_mean(mc.chain(m));
    means.row(static_cast<Eigen::Index>(m)) = mu.transpose();
    const Eigen::MatrixXd dev = detail::centered_columns(mc.chain(m), mu);
    wb.per_chain_var.row(static_cast<Eigen::Index>(m)) =
        dev.colwise().squaredNorm() / static_cast<double>(n - 1);
  }
  wb.within = wb.per_chain_var.colwise().mean().transpose();
  const MeanVector grand = global_mean(mc);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(d);
  for (std::size_t m = 0; m < M; ++m)
    b += (means.row(static_cast<Eigen::Index>(m)).transpose() - grand).array().square().matrix();
  wb.between = b * static_cast<double>(n) / static_cast<double>(M - 1);
  return wb;
}

AutocovSequence autocov_stan(const MultiChain& mc, Eigen::Index max_lag) {
  if (mc.M() < 2) throw data_error("autocov_stan requires at least 2 chains");
  if (max_lag < 0 || max_lag >= mc.n())
    throw data_error("max_lag out of range: need 0 <= max_lag <= n-1");
  const WithinBetween wb = within_between(mc);
  const Eigen::Index d = mc.d();

  // Average of own-mean centered per-chain autocovariances, diagonal only.
  AutocovSequence acc;
  for (std::size_t m = 0; m < mc.M(); ++m) {
    AutocovSequence per = autocov_fft_with_mean(mc.chain(m), chain_mean(mc.chain(m)), max_lag);
    if (m == 0) {
      acc = std::move(per);
    } else {
      for (std::size_t i = 0; i < acc.lags.size(); ++i) acc.lags[i] += per.lags[i];
    }
  }
  const double M = static_cast<double>(mc.M());
  const Eigen::VectorXd offset =
      (wb.between - wb.within) / static_cast<double>(mc.n());
  for (auto& z : acc.lags) {
    z /= M;
    Eigen::VectorXd diag = z.diagonal() + offset;
    z = Eigen::MatrixXd::Zero(d, d);
    z.diagonal() = diag;
  }
  acc.centering = Centering::stan;
  return acc;
}

}  // namespace mcse
