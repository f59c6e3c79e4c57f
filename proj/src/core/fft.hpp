#pragma once

#include <complex>
#include <vector>

namespace halflap {

/// In-place radix-2 complex FFT, size must be a power of two.
/// inverse=true applies the unnormalized inverse transform; the caller
/// divides by the size.
void fft_radix2(std::vector<std::complex<double>>& data, bool inverse);

inline size_t next_pow2(size_t m) {
  size_t p = 1;
  while (p < m) p <<= 1;
  return p;
}

}  // namespace halflap
