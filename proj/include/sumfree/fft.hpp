#pragma once

// Discrete Fourier transform on Z/nZ. Powers of two use an in-place
// iterative radix-2 transform; other lengths go through Bluestein's chirp
// transform onto a power-of-two convolution.

#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <vector>

#include "sumfree/core.hpp"

namespace sumfree::fft {

namespace detail {

inline void radix2(std::span<Complex> a, bool invert) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len / 2;
    // Twiddles evaluated directly (not by repeated multiplication) to keep
    // the error O(eps log n).
    std::vector<Complex> tw(half);
    const double sign = invert ? 1.0 : -1.0;
    for (std::size_t k = 0; k < half; ++k) {
      double ang = sign * 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(len);
      tw[k] = Complex(std::cos(ang), std::sin(ang));
    }
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t k = 0; k < half; ++k) {
        Complex u = a[i + k];
        Complex v = a[i + k + half] * tw[k];
        a[i + k] = u + v;
        a[i + k + half] = u - v;
      }
    }
  }
}

inline bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline void bluestein(std::span<Complex> a, bool invert) {
  const std::size_t n = a.size();
  const std::size_t m = pow2_at_least(2 * n - 1);
  const double sign = invert ? 1.0 : -1.0;
  std::vector<Complex> chirp(n);
  for (std::size_t k = 0; k < n; ++k) {
    // k^2 mod 2n keeps the angle argument small.
    std::size_t k2 = (k * k) % (2 * n);
    double ang = sign * std::numbers::pi * static_cast<double>(k2) / static_cast<double>(n);
    chirp[k] = Complex(std::cos(ang), std::sin(ang));
  }
  std::vector<Complex> x(m), y(m);
  for (std::size_t k = 0; k < n; ++k) x[k] = a[k] * chirp[k];
  y[0] = std::conj(chirp[0]);
  for (std::size_t k = 1; k < n; ++k) y[k] = y[m - k] = std::conj(chirp[k]);
  radix2(x, false);
  radix2(y, false);
  for (std::size_t i = 0; i < m; ++i) x[i] *= y[i];
  radix2(x, true);
  for (std::size_t k = 0; k < n; ++k) a[k] = x[k] / static_cast<double>(m) * chirp[k];
}

}  // namespace detail

/// In place: a[r] <- sum_x a[x] e(-rx/n). Unnormalized.
inline void forward(std::span<Complex> a) {
  if (a.size() <= 1) return;
  if (detail::is_pow2(a.size()))
    detail::radix2(a, false);
  else
    detail::bluestein(a, false);
}

/// In place inverse of forward, including the 1/n factor.
inline void inverse(std::span<Complex> a) {
  if (a.size() <= 1) return;
  if (detail::is_pow2(a.size()))
    detail::radix2(a, true);
  else
    detail::bluestein(a, true);
  const double inv = 1.0 / static_cast<double>(a.size());
  for (auto& v : a) v *= inv;
}

/// Linear convolution of two real sequences, rounded-free (caller rounds if integral).
inline std::vector<double> convolve(std::span<const double> f, std::span<const double> g) {
  if (f.empty() || g.empty()) return {};
  const std::size_t out = f.size() + g.size() - 1;
  const std::size_t m = pow2_at_least(out);
  std::vector<Complex> a(m), b(m);
  for (std::size_t i = 0; i < f.size(); ++i) a[i] = f[i];
  for (std::size_t i = 0; i < g.size(); ++i) b[i] = g[i];
  forward(a);
  forward(b);
  for (std::size_t i = 0; i < m; ++i) a[i] *= b[i];
  inverse(a);
  std::vector<double> r(out);
  for (std::size_t i = 0; i < out; ++i) r[i] = a[i].real();
  return r;
}

}  // namespace sumfree::fft
