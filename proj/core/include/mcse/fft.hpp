#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace mcse::fft {

/// Smallest power of two >= 2n (zero-padded circular correlation length).
std::size_t pad_length(std::size_t n);

/// Real-to-complex forward transform of length m (m a supported pad length).
/// `in` must hold m reals; returns m/2 + 1 bins. Deterministic: cached
/// FFTW plans with fixed flags, identical input gives identical output bits.
std::vector<std::complex<double>> forward(const std::vector<double>& in);

/// Complex-to-real inverse of a length m/2+1 half-spectrum; output has m
/// reals and is unnormalized (scale by 1/m to invert `forward`).
std::vector<double> inverse(const std::vector<std::complex<double>>& in, std::size_t m);

}  // namespace mcse::fft
