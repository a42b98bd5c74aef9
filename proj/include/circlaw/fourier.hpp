#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "circlaw/test_function.hpp"

namespace circlaw {

class TruncationFailureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// In-place radix-2 FFT (decimation in time), forward transform
// X_k = sum_j x_j e^{-2 pi i j k / N}.
inline void fft_radix2(std::vector<Cplx>& x) {
  const std::size_t n = x.size();
  if (n == 0 || (n & (n - 1)) != 0) throw std::invalid_argument("fft needs a power-of-two size");
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(x[i], x[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    double ang = -2.0 * std::numbers::pi / static_cast<double>(len);
    Cplx wl = std::polar(1.0, ang);
    for (std::size_t i = 0; i < n; i += len) {
      Cplx w = 1.0;
      for (std::size_t j = 0; j < len / 2; ++j) {
        Cplx u = x[i + j];
        Cplx v = x[i + j + len / 2] * w;
        x[i + j] = u + v;
        x[i + j + len / 2] = u - v;
        w *= wl;
      }
    }
  }
}

// Fourier coefficients of f restricted to the unit circle:
// fhat(k) = (1/2pi) int f(theta) e^{-ik theta} dtheta, |k| <= k_max,
// from an fft_size-point transform. Exact for trigonometric polynomials of
// degree < fft_size/2, spectrally accurate otherwise.
struct BoundaryFourier {
  int k_max = 0;
  std::vector<Cplx> coef;  // index k + k_max, k in [-k_max, k_max]

  Cplx operator()(int k) const {
    if (std::abs(k) > k_max) return 0.0;
    return coef[static_cast<std::size_t>(k + k_max)];
  }
};

inline BoundaryFourier boundary_fourier(const TestFunction& f, int k_max = 1024,
                                        int fft_size = 4096, double tail_tol = 1e-10) {
  if (2 * k_max >= fft_size) throw std::invalid_argument("k_max must be below fft_size/2");
  std::vector<Cplx> x(static_cast<std::size_t>(fft_size));
  for (int j = 0; j < fft_size; ++j)
    x[static_cast<std::size_t>(j)] = f.boundary(2.0 * std::numbers::pi * j / fft_size);
  fft_radix2(x);
  BoundaryFourier out;
  out.k_max = k_max;
  out.coef.resize(2 * static_cast<std::size_t>(k_max) + 1);
  for (int k = -k_max; k <= k_max; ++k) {
    int bin = (k >= 0) ? k : fft_size + k;
    out.coef[static_cast<std::size_t>(k + k_max)] =
        x[static_cast<std::size_t>(bin)] / static_cast<double>(fft_size);
  }
  // a non-decaying tail near k_max means the truncated sum is untrustworthy
  double tail = 0.0;
  int probe = std::max(1, k_max / 16);
  for (int k = k_max - probe + 1; k <= k_max; ++k)
    tail = std::max({tail, std::abs(out(k)), std::abs(out(-k))});
  if (tail > tail_tol)
    throw TruncationFailureError("boundary fourier tail " + std::to_string(tail) +
                                 " above tolerance at k_max");
  return out;
}

// real part of f on the circle: used for checking real-valuedness conventions
inline bool boundary_coeffs_hermitian(const BoundaryFourier& bf, double tol = 1e-10) {
  for (int k = 1; k <= bf.k_max; ++k)
    if (std::abs(bf(-k) - std::conj(bf(k))) > tol) return false;
  return true;
}

}  // namespace circlaw
