#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

namespace circlaw {

// Counter-based pseudo-random generator built on the splitmix64 finalizer.
// Every stream is a pure function of (seed, stream index), so replica r of a
// Monte Carlo run can draw from derive_stream(seed, r) and parallel/serial
// schedules produce bit-identical output.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t stream) {
  return mix64(seed ^ mix64(stream ^ 0x8e57d3bfb1a1f24dULL));
}

class Rng {
 public:
  explicit Rng(std::uint64_t stream_key) : state_(stream_key) {}

  static Rng for_replica(std::uint64_t seed, std::uint64_t replica) {
    return Rng(derive_stream(seed, replica));
  }

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t x = state_;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  // uniform on [0,1), 53-bit resolution
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // uniform on (0,1], safe as a log() argument
  double uniform_pos() {
    return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
  }

  double exponential() { return -std::log(uniform_pos()); }

  // standard complex gaussian: mean 0, E|Z|^2 = 1 (Re, Im ~ N(0, 1/2) indep.)
  std::complex<double> complex_gaussian() {
    double r = std::sqrt(-std::log(uniform_pos()));
    double t = 2.0 * std::numbers::pi * uniform();
    return {r * std::cos(t), r * std::sin(t)};
  }

  // real N(0,1)
  double gaussian() {
    double r = std::sqrt(-2.0 * std::log(uniform_pos()));
    return r * std::cos(2.0 * std::numbers::pi * uniform());
  }

  // Gamma(shape, 1) for integer shape. Sum of exponentials up to shape 32,
  // Marsaglia-Tsang squeeze beyond that.
  double gamma_integer_shape(int shape) {
    if (shape <= 0) return 0.0;
    if (shape <= 32) {
      double acc = 0.0;
      for (int i = 0; i < shape; ++i) acc += exponential();
      return acc;
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / (3.0 * std::sqrt(d));
    for (;;) {
      double x = gaussian();
      double v = 1.0 + c * x;
      if (v <= 0.0) continue;
      v = v * v * v;
      double u = uniform_pos();
      if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) return d * v;
    }
  }

 private:
  std::uint64_t state_;
};

}  // namespace circlaw
