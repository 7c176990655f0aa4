#include "mcse/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>

namespace mcse::fft {

namespace {

// FFTW plan creation is not thread-safe; execution via the new-array
// interface is. Plans are created once per length with FFTW_UNALIGNED so
// they can run on arbitrary caller buffers.
struct PlanPair {
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;
};

std::mutex plan_mutex;
std::map<std::size_t, PlanPair>& plan_cache() {
  static std::map<std::size_t, PlanPair> cache;
  return cache;
}

const PlanPair& plans_for(std::size_t m) {
  std::lock_guard<std::mutex> lock(plan_mutex);
  auto& cache = plan_cache();
  auto it = cache.find(m);
  if (it != cache.end()) return it->second;
  std::vector<double> real(m);
  std::vector<std::complex<double>> cplx(m / 2 + 1);
  PlanPair p;
  p.r2c = fftw_plan_dft_r2c_1d(static_cast<int>(m), real.data(),
                               reinterpret_cast<fftw_complex*>(cplx.data()),
                               FFTW_ESTIMATE | FFTW_UNALIGNED);
  p.c2r = fftw_plan_dft_c2r_1d(static_cast<int>(m),
                               reinterpret_cast<fftw_complex*>(cplx.data()), real.data(),
                               FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (!p.r2c || !p.c2r) throw std::runtime_error("FFTW plan creation failed");
  return cache.emplace(m, p).first->second;
}

}  // namespace

std::size_t pad_length(std::size_t n) {
  std::size_t m = 1;
  while (m < 2 * n) m <<= 1;
  return m;
}

std::vector<std::complex<double>> forward(const std::vector<double>& in) {
  const std::size_t m = in.size();
  const PlanPair& p = plans_for(m);
  std::vector<std::complex<double>> out(m / 2 + 1);
  // r2c does not modify its input.
  fftw_execute_dft_r2c(p.r2c, const_cast<double*>(in.data()),
                       reinterpret_cast<fftw_complex*>(out.data()));
  return out;
}

std::vector<double> inverse(const std::vector<std::complex<double>>& in, std::size_t m) {
  const PlanPair& p = plans_for(m);
  // c2r destroys its input; work on a copy.
  std::vector<std::complex<double>> scratch(in);
  std::vector<double> out(m);
  fftw_execute_dft_c2r(p.c2r, reinterpret_cast<fftw_complex*>(scratch.data()), out.data());
  return out;
}

}  // namespace mcse::fft
