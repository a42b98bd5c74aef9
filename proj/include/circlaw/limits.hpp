#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <utility>

#include "circlaw/fourier.hpp"
#include "circlaw/quadrature.hpp"
#include "circlaw/test_function.hpp"

namespace circlaw {

struct VariancePrediction {
  double h1_part = 0.0;      // (1/4pi) |f|^2_{H^1(U)}
  double h_half_part = 0.0;  // (1/2)   |f|^2_{H^{1/2}(dU)}
  double total = 0.0;
};

// exact integral of a polynomial in (z, zbar) over the unit disk:
// int_U z^a zbar^b d^2z = delta_{ab} pi / (a+1)
inline Cplx disk_poly_integral(const PolyZZbar& p) {
  Cplx acc = 0.0;
  for (const auto& [ab, c] : p.terms())
    if (ab.first == ab.second) acc += c * std::numbers::pi / (ab.first + 1.0);
  return acc;
}

// squared Dirichlet seminorm int_U |grad f|^2 d^2 z, via
// |grad f|^2 = 2(|df|^2 + |dbar f|^2); tensor Gauss-Legendre in (r, theta)
// with auto-doubling orders.
inline double h1_disk_seminorm_sq(const TestFunction& f, double rel_tol = 1e-8) {
  if (!f.has_derivatives())
    throw CapabilityError("h1 seminorm needs Wirtinger derivative callbacks");
  auto g = [&](double r, double t) {
    Cplx z = std::polar(r, t);
    return 2.0 * (std::norm(f.wirtinger_dz(z)) + std::norm(f.wirtinger_dzbar(z)));
  };
  return integrate_disk(g, rel_tol);
}

// H^1(U) inner product int_U grad g1 . grad g2:
// grad g1 . grad g2 = 2 Re(dg1 conj(dg2) + dbar g1 conj(dbar g2))
inline double h1_disk_inner(const TestFunction& g1, const TestFunction& g2,
                            double rel_tol = 1e-8) {
  auto g = [&](double r, double t) {
    Cplx z = std::polar(r, t);
    return 2.0 * (g1.wirtinger_dz(z) * std::conj(g2.wirtinger_dz(z)) +
                  g1.wirtinger_dzbar(z) * std::conj(g2.wirtinger_dzbar(z)))
                     .real();
  };
  return integrate_disk(g, rel_tol);
}

// Sum_{k in Z} |k| |fhat(k)|^2 from the boundary restriction.
inline double h_half_norm_sq(const TestFunction& f, int k_max = 1024) {
  BoundaryFourier bf = boundary_fourier(f, k_max);
  double acc = 0.0;
  for (int k = 1; k <= k_max; ++k)
    acc += k * (std::norm(bf(k)) + std::norm(bf(-k)));
  return acc;
}

// Sum_{k in Z} |k| fhat(k) conj(ghat(k))
inline Cplx h_half_inner(const TestFunction& f, const TestFunction& g, int k_max = 1024) {
  BoundaryFourier bf = boundary_fourier(f, k_max);
  BoundaryFourier bg = boundary_fourier(g, k_max);
  Cplx acc = 0.0;
  for (int k = 1; k <= k_max; ++k)
    acc += static_cast<double>(k) * (bf(k) * std::conj(bg(k)) + bf(-k) * std::conj(bg(-k)));
  return acc;
}

// Limiting variance of the centered linear statistic of a real C^1 test
// function: (1/4pi) |f|^2_{H^1(U)} + (1/2) |f|^2_{H^{1/2}(dU)}.
inline VariancePrediction predict_variance(const TestFunction& f) {
  if (!f.real_valued())
    throw std::invalid_argument("predict_variance needs a real-valued test function");
  VariancePrediction out;
  out.h1_part = h1_disk_seminorm_sq(f) / (4.0 * std::numbers::pi);
  out.h_half_part = 0.5 * h_half_norm_sq(f);
  out.total = out.h1_part + out.h_half_part;
  return out;
}

// Limiting covariance for complex-valued C^1 test functions:
// (1/pi) int_U dbar f conj(dbar g) d^2 z + sum_{k>0} k fhat(k) conj(ghat(k)).
inline Cplx predict_covariance(const TestFunction& f, const TestFunction& g) {
  if (!f.has_derivatives() || !g.has_derivatives())
    throw CapabilityError("predict_covariance needs derivative callbacks");
  auto integrand = [&](double r, double t) -> double {
    Cplx z = std::polar(r, t);
    return (f.wirtinger_dzbar(z) * std::conj(g.wirtinger_dzbar(z))).real();
  };
  auto integrand_im = [&](double r, double t) -> double {
    Cplx z = std::polar(r, t);
    return (f.wirtinger_dzbar(z) * std::conj(g.wirtinger_dzbar(z))).imag();
  };
  double re = integrate_disk(integrand, 1e-9) / std::numbers::pi;
  double im = integrate_disk(integrand_im, 1e-9) / std::numbers::pi;
  BoundaryFourier bf = boundary_fourier(f);
  BoundaryFourier bg = boundary_fourier(g);
  Cplx boundary = 0.0;
  for (int k = 1; k <= bf.k_max; ++k)
    boundary += static_cast<double>(k) * bf(k) * std::conj(bg(k));
  return Cplx(re, im) + boundary;
}

// (1/pi) |f'|^2_{L^2(U)} for an analytic polynomial f = sum c_j z^j:
// exactly sum_j j |c_j|^2.
inline double analytic_variance(const TestFunction& f) {
  const PolyZZbar& p = f.as_poly();
  if (!p.is_analytic())
    throw std::invalid_argument("analytic_variance needs a polynomial in z only");
  double acc = 0.0;
  for (const auto& [ab, c] : p.terms()) acc += ab.first * std::norm(c);
  return acc;
}

// Squared H^1(C) norm of the projection of f onto the subspace harmonic off
// the unit circle, defined operationally as 4 pi * the limiting variance.
inline double gff_projection_norm_sq(const TestFunction& f) {
  return 4.0 * std::numbers::pi * predict_variance(f).total;
}

// For g in span{Re z^k, Im z^k}: the pair (<g1,g2>_{H^1(U)}, <g1,g2>_{H^{1/2}}),
// exposed so the ratio between the two boundary-norm conventions can be
// inspected directly.
inline std::pair<double, double> harmonic_h1_vs_hhalf_check(const TestFunction& g1,
                                                            const TestFunction& g2) {
  double h1 = h1_disk_inner(g1, g2, 1e-9);
  double hh = h_half_inner(g1, g2).real();
  return {h1, hh};
}

}  // namespace circlaw
