#pragma once

#include "ellikorn/errors.hpp"

#include <complex>
#include <vector>

namespace ellikorn {

// In-place radix-2 FFT; size must be a power of two.
inline void fft_inplace(std::vector<std::complex<double>>& a, bool inverse) {
  const std::size_t n = a.size();
  if (n == 0 || (n & (n - 1)) != 0)
    throw NonPowerOfTwoGrid("FFT size must be a power of two");
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    double ang = 2 * M_PI / static_cast<double>(len) * (inverse ? 1 : -1);
    std::complex<double> wl(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0);
      for (std::size_t j = 0; j < len / 2; ++j) {
        auto u = a[i + j], v = a[i + j + len / 2] * w;
        a[i + j] = u + v;
        a[i + j + len / 2] = u - v;
        w *= wl;
      }
    }
  }
  if (inverse)
    for (auto& x : a) x /= static_cast<double>(n);
}

// Row-major ny x nx grid transform (both powers of two).
inline void fft2_inplace(std::vector<std::complex<double>>& a, int nx, int ny,
                         bool inverse) {
  std::vector<std::complex<double>> buf(std::max(nx, ny));
  for (int j = 0; j < ny; ++j) {
    buf.assign(a.begin() + static_cast<std::size_t>(j) * nx,
               a.begin() + static_cast<std::size_t>(j + 1) * nx);
    fft_inplace(buf, inverse);
    std::copy(buf.begin(), buf.begin() + nx,
              a.begin() + static_cast<std::size_t>(j) * nx);
  }
  for (int i = 0; i < nx; ++i) {
    buf.resize(ny);
    for (int j = 0; j < ny; ++j) buf[j] = a[static_cast<std::size_t>(j) * nx + i];
    fft_inplace(buf, inverse);
    for (int j = 0; j < ny; ++j) a[static_cast<std::size_t>(j) * nx + i] = buf[j];
  }
}

}  // namespace ellikorn
