#include "mcse/ise.hpp"

#include <cmath>

#include "mcse/errors.hpp"

namespace mcse {

IseResult ise_from_autocov(const AutocovSequence& gamma) {
  if (gamma.d != 1) throw std::invalid_argument("ise_from_autocov requires d = 1");
  if (gamma.lags.empty()) throw std::invalid_argument("ise_from_autocov: empty sequence");
  const double gamma0 = gamma.scalar(0);
  if (gamma0 < 0.0) throw numerical_error("lag-0 variance is negative");

  const std::size_t L = gamma.lags.size();
  IseResult r;
  double sigma2 = -gamma0;
  for (std::size_t i = 0; 2 * i < L; ++i) {
    const double even = gamma.scalar(2 * i);
    const double odd = (2 * i + 1 < L) ? gamma.scalar(2 * i + 1) : 0.0;
    const double pair = even + odd;
    if (!(pair > 0.0)) break;
    sigma2 += 2.0 * pair;
    r.pairs_used.push_back(pair);
    r.k_n = static_cast<long>(i);
  }
  if (r.k_n < 0) {
    // Degenerate fallback: the i.i.d. lower bound rather than -gamma0.
    r.sigma2 = gamma0;
    return r;
  }
  r.sigma2 = std::max(sigma2, 0.0);
  return r;
}

IseResult ise_variance(const Chain& chain) {
  if (chain.d() != 1) throw std::invalid_argument("ise_variance requires d = 1");
  // Same arithmetic as ise_from_autocov over autocov_fft at all lags, but
  // the lag values are read straight off the shared FFT correlation array
  // instead of materializing n single-entry matrices.
  const Eigen::MatrixXd centered = detail::centered_columns(chain, chain_mean(chain));
  const detail::ColumnSpectra spectra = detail::column_spectra(centered);
  const std::vector<double> raw = detail::pair_correlation(spectra, 0, 0);
  const std::size_t m = spectra.m;
  const Eigen::Index n = chain.n();
  const std::size_t L = static_cast<std::size_t>(n);  // lags 0 .. n-1

  const double gamma0 = detail::zeta_entry(raw, 0, m, n);
  if (gamma0 < 0.0) throw numerical_error("lag-0 variance is negative");

  IseResult r;
  double sigma2 = -gamma0;
  for (std::size_t i = 0; 2 * i < L; ++i) {
    const double even = detail::zeta_entry(raw, 2 * i, m, n);
    const double odd = (2 * i + 1 < L) ? detail::zeta_entry(raw, 2 * i + 1, m, n) : 0.0;
    const double pair = even + odd;
    if (!(pair > 0.0)) break;
    sigma2 += 2.0 * pair;
    r.pairs_used.push_back(pair);
    r.k_n = static_cast<long>(i);
  }
  if (r.k_n < 0) {
    r.sigma2 = gamma0;
    return r;
  }
  r.sigma2 = std::max(sigma2, 0.0);
  return r;
}

namespace {

DiagonalSD assemble(std::vector<IseResult> per_coord, SdSource source) {
  const Eigen::Index d = static_cast<Eigen::Index>(per_coord.size());
  DiagonalSD out;
  out.sds.resize(d);
  out.variances.resize(d);
  out.source = source;
  for (Eigen::Index j = 0; j < d; ++j) {
    out.variances(j) = per_coord[static_cast<std::size_t>(j)].sigma2;
    out.sds(j) = std::sqrt(out.variances(j));
    out.k_n.push_back(per_coord[static_cast<std::size_t>(j)].k_n);
  }
  return out;
}

}  // namespace

DiagonalSD ise_diagonal(const Chain& chain) {
  std::vector<IseResult> per;
  per.reserve(static_cast<std::size_t>(chain.d()));
  for (Eigen::Index j = 0; j < chain.d(); ++j) per.push_back(ise_variance(chain.coordinate(j)));
  return assemble(std::move(per), SdSource::ise);
}

DiagonalSD g_ise_diagonal(const MultiChain& mc) {
  std::vector<IseResult> per;
  per.reserve(static_cast<std::size_t>(mc.d()));
  for (Eigen::Index j = 0; j < mc.d(); ++j) {
    std::vector<Chain> coords;
    coords.reserve(mc.M());
    for (std::size_t m = 0; m < mc.M(); ++m) coords.push_back(mc.chain(m).coordinate(j));
    per.push_back(ise_from_autocov(autocov_global(MultiChain(std::move(coords)), mc.n() - 1)));
  }
  return assemble(std::move(per), SdSource::g_ise);
}

DiagonalSD stan_ise_diagonal(const MultiChain& mc) {
  if (mc.M() < 2) throw data_error("stan_ise_diagonal requires at least 2 chains");
  std::vector<IseResult> per;
  per.reserve(static_cast<std::size_t>(mc.d()));
  for (Eigen::Index j = 0; j < mc.d(); ++j) {
    std::vector<Chain> coords;
    coords.reserve(mc.M());
    for (std::size_t m = 0; m < mc.M(); ++m) coords.push_back(mc.chain(m).coordinate(j));
    per.push_back(ise_from_autocov(autocov_stan(MultiChain(std::move(coords)), mc.n() - 1)));
  }
  return assemble(std::move(per), SdSource::stan_ise);
}

}  // namespace mcse
