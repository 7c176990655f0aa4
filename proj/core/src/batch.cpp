#include "mcse/batch.hpp"

#include <cmath>
#include <string>

#include "mcse/autocov.hpp"
#include "mcse/errors.hpp"

namespace mcse {

BatchConfig default_batch_size(Eigen::Index n) {
  if (n < 8) throw data_error("default_batch_size requires n >= 8");
  Eigen::Index b = static_cast<Eigen::Index>(std::cbrt(static_cast<double>(n)));
  while ((b + 1) * (b + 1) * (b + 1) <= n) ++b;
  while (b > 1 && b * b * b > n) --b;
  return batch_config(n, b);
}

BatchConfig batch_config(Eigen::Index n, Eigen::Index b_n) {
  if (b_n < 1 || b_n > n) throw data_error("batch size out of range");
  BatchConfig cfg;
  cfg.b_n = b_n;
  cfg.a_n = n / b_n;
  cfg.dropped = n - cfg.a_n * cfg.b_n;
  if (cfg.a_n < 2) throw data_error("batch configuration leaves fewer than 2 batches");
  return cfg;
}

namespace {

// One batch-mean matrix (a_n x d) for the retained window of a chain.
Eigen::MatrixXd batch_means(const Chain& chain, const BatchConfig& cfg) {
  const Eigen::Index d = chain.d();
  Eigen::MatrixXd bm(cfg.a_n, d);
  const Eigen::MatrixXd& s = chain.samples();
  for (Eigen::Index j = 0; j < d; ++j) {
    const double* col = s.col(j).data();
    for (Eigen::Index k = 0; k < cfg.a_n; ++k)
      bm(k, j) = detail::pairwise_sum(col + k * cfg.b_n, static_cast<std::size_t>(cfg.b_n)) /
                 static_cast<double>(cfg.b_n);
  }
  return bm;
}

Eigen::MatrixXd pooled_bm_cov(const MultiChain& mc, const BatchConfig& cfg) {
  const Eigen::Index d = mc.d();
  if (cfg.retained() > mc.n()) throw data_error("batch configuration exceeds chain length");
  const Eigen::Index total = static_cast<Eigen::Index>(mc.M()) * cfg.a_n;
  if (total < 2) throw data_error("fewer than 2 batches in total");

  // Grand mean over the retained windows (equals the retained-sample mean
  // of the single chain when M = 1).
  std::vector<Chain> retained;
  retained.reserve(mc.M());
  for (std::size_t m = 0; m < mc.M(); ++m) retained.push_back(mc.chain(m).head(cfg.retained()));
  const MeanVector center = global_mean(MultiChain(retained));

  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(d, d);
  for (const Chain& c : retained) {
    const Eigen::MatrixXd bm = batch_means(c, cfg);
    const Eigen::MatrixXd dev = bm.rowwise() - center.transpose();
    acc += dev.transpose() * dev;
  }
  return acc * (static_cast<double>(cfg.b_n) / static_cast<double>(total - 1));
}

}  // namespace

Eigen::MatrixXd batch_means_cov(const Chain& chain, const BatchConfig& cfg) {
  return pooled_bm_cov(MultiChain({chain}), cfg);
}

Eigen::MatrixXd gbm_cov(const MultiChain& mc, const BatchConfig& cfg) {
  return pooled_bm_cov(mc, cfg);
}

CovCorrPair corr_from_cov(const Eigen::MatrixXd& cov) {
  const Eigen::Index d = cov.rows();
  CovCorrPair out;
  out.cov = cov;
  out.sd.resize(d);
  for (Eigen::Index j = 0; j < d; ++j) {
    if (!(cov(j, j) > 0.0))
      throw numerical_error("degenerate variance on coordinate " + std::to_string(j));
    out.sd(j) = std::sqrt(cov(j, j));
  }
  out.corr.resize(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    out.corr(i, i) = 1.0;
    for (Eigen::Index j = i + 1; j < d; ++j) {
      const double r = cov(i, j) / (out.sd(i) * out.sd(j));
      out.corr(i, j) = r;
      out.corr(j, i) = r;
    }
  }
  return out;
}

Eigen::MatrixXd spectral_variance(const Chain& chain, Eigen::Index bandwidth) {
  if (bandwidth < 1 || bandwidth >= chain.n())
    throw data_error("spectral bandwidth out of range: need 1 <= bandwidth <= n-1");
  const AutocovSequence zeta = autocov_fft(chain, bandwidth);
  Eigen::MatrixXd sigma = (zeta.lags[0] + zeta.lags[0].transpose()) / 2.0;
  for (Eigen::Index k = 1; k <= bandwidth; ++k) {
    const double w = 1.0 - static_cast<double>(k) / static_cast<double>(bandwidth + 1);
    const auto& z = zeta.lags[static_cast<std::size_t>(k)];
    sigma += w * (z + z.transpose());
  }
  return sigma;
}

}  // namespace mcse
