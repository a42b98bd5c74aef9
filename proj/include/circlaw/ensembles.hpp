#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "circlaw/eigensolver.hpp"
#include "circlaw/kernels.hpp"
#include "circlaw/matrix.hpp"
#include "circlaw/rng.hpp"

namespace circlaw {

// One realization of an n-point process in the plane. Identical
// (ensemble, seed) pairs reproduce bit-identical points.
struct PointSample {
  std::vector<Complex> points;
  EnsembleSpec ensemble;
  std::uint64_t seed = 0;
};

// The moduli of a rotation invariant determinantal sample have the law of
// independent radii R_k, k = 0..n-1, with density proportional to
// r^{2k+1} mu~(r).
struct ModuliSample {
  std::vector<double> radii;
  EnsembleSpec ensemble;
  std::uint64_t seed = 0;
};

class EnvelopeFailureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// n x n matrix of iid complex gaussians with entry variance 1/n
// (real and imaginary parts each N(0, 1/(2n))).
inline ComplexMatrix sample_ginibre_matrix(int n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("sample_ginibre_matrix: n must be >= 1");
  Rng rng = Rng::for_replica(seed, 0);
  ComplexMatrix a(n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = scale * rng.complex_gaussian();
  return a;
}

inline PointSample sample_ginibre_eigs(int n, std::uint64_t seed) {
  ComplexMatrix a = sample_ginibre_matrix(n, seed);
  EigResult eig = eigenvalues(a);
  return PointSample{std::move(eig.eigenvalues), EnsembleSpec(Family::ginibre, n), seed};
}

// Independent radii: ginibre R_k^2 ~ Gamma(k+1, n); bergman R_k^2 ~ Beta(k+1, 1).
inline ModuliSample sample_moduli(const EnsembleSpec& ens, std::uint64_t seed) {
  Rng rng = Rng::for_replica(seed, 0);
  ModuliSample out;
  out.ensemble = ens;
  out.seed = seed;
  out.radii.resize(ens.n);
  switch (ens.family) {
    case Family::ginibre:
      for (int k = 0; k < ens.n; ++k)
        out.radii[k] = std::sqrt(rng.gamma_integer_shape(k + 1) / ens.n);
      return out;
    case Family::bergman:
      for (int k = 0; k < ens.n; ++k)
        out.radii[k] = std::pow(rng.uniform_pos(), 1.0 / (2.0 * (k + 1)));
      return out;
    default:
      throw UnsupportedEnsembleError("sample_moduli: only ginibre and bergman");
  }
}

namespace detail {

// Orthonormal feature vector psi(z)/|psi(z)| for the projection kernel,
// built from scaled logs so large n cannot overflow: component l is
// sqrt(c_{n,l}) z^l up to a common positive factor.
inline void unit_feature_vector(const ProjectionKernel& kernel, Complex z,
                                std::vector<Complex>& out) {
  const int n = kernel.ensemble.n;
  out.resize(n);
  const double r = std::abs(z);
  const Complex phase = (r == 0.0) ? Complex(1.0) : z / r;
  const double log_r = (r == 0.0) ? -1e300 : std::log(r);
  double max_log = -1e300;
  std::vector<double> logs(static_cast<std::size_t>(n));
  for (int l = 0; l < n; ++l) {
    double t = 0.5 * kernel.log_coefficient(l) + l * log_r;
    logs[static_cast<std::size_t>(l)] = t;
    max_log = std::max(max_log, t);
  }
  Complex ph = 1.0;
  double norm2 = 0.0;
  for (int l = 0; l < n; ++l) {
    double mag = std::exp(logs[static_cast<std::size_t>(l)] - max_log);
    out[static_cast<std::size_t>(l)] = mag * ph;
    norm2 += mag * mag;
    ph *= phase;
  }
  double inv = 1.0 / std::sqrt(norm2);
  for (auto& c : out) c *= inv;
}

// Radius with density proportional to r^{2l+1} mu~(r).
inline double sample_kernel_radius(const EnsembleSpec& ens, int l, Rng& rng) {
  switch (ens.family) {
    case Family::ginibre: return std::sqrt(rng.gamma_integer_shape(l + 1) / ens.n);
    case Family::bergman: return std::pow(rng.uniform_pos(), 1.0 / (2.0 * (l + 1)));
    default: throw UnsupportedEnsembleError("sample_kernel_radius: unsupported family");
  }
}

}  // namespace detail

// Sequential conditional sampler for a rank-n projection determinantal
// process. Points are drawn one at a time: the proposal is the one-point
// intensity K(z,zbar)/n (mixture over degrees, radius from the degree-l
// radial law), and acceptance uses the residual after projecting out the
// directions already used. The conditional density is dominated by the
// diagonal kernel, so the acceptance ratio is a true probability.
inline PointSample sample_spp(const ProjectionKernel& kernel, std::uint64_t seed) {
  const EnsembleSpec ens = kernel.ensemble;
  const int n = ens.n;
  Rng rng = Rng::for_replica(seed, 0);
  std::vector<std::vector<Complex>> basis;  // orthonormal used directions
  basis.reserve(n);
  PointSample out;
  out.ensemble = ens;
  out.seed = seed;
  out.points.reserve(n);
  std::vector<Complex> psi, resid;
  const long max_tries_per_point = 4000L * n;
  for (int i = 0; i < n; ++i) {
    long tries = 0;
    for (;;) {
      if (++tries > max_tries_per_point)
        throw EnvelopeFailureError(
            "sample_spp: acceptance rate collapsed at level " + std::to_string(i) +
            " of " + std::to_string(n) + " after " + std::to_string(tries - 1) + " proposals");
      int l = static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(n));
      double r = detail::sample_kernel_radius(ens, l, rng);
      double theta = 2.0 * std::numbers::pi * rng.uniform();
      Complex z = std::polar(r, theta);
      detail::unit_feature_vector(kernel, z, psi);
      // residual mass = 1 - sum_j |<u_j, psi>|^2  (psi is unit)
      double used = 0.0;
      for (const auto& u : basis) {
        Complex dot = 0.0;
        for (int t = 0; t < n; ++t) dot += std::conj(u[static_cast<std::size_t>(t)]) * psi[static_cast<std::size_t>(t)];
        used += std::norm(dot);
      }
      double accept = 1.0 - used;
      if (accept <= 0.0) continue;
      if (rng.uniform() >= accept) continue;
      // Gram-Schmidt the accepted direction into the basis
      resid = psi;
      for (int pass = 0; pass < 2; ++pass) {
        for (const auto& u : basis) {
          Complex dot = 0.0;
          for (int t = 0; t < n; ++t) dot += std::conj(u[static_cast<std::size_t>(t)]) * resid[static_cast<std::size_t>(t)];
          for (int t = 0; t < n; ++t) resid[static_cast<std::size_t>(t)] -= dot * u[static_cast<std::size_t>(t)];
        }
      }
      double rn = 0.0;
      for (const auto& c : resid) rn += std::norm(c);
      rn = std::sqrt(rn);
      if (!(rn > 1e-14)) continue;  // numerically dependent, retry
      for (auto& c : resid) c /= rn;
      basis.push_back(resid);
      out.points.push_back(z);
      break;
    }
  }
  return out;
}

inline PointSample sample_bergman(int n, std::uint64_t seed) {
  return sample_spp(ProjectionKernel(EnsembleSpec(Family::bergman, n)), seed);
}

// n iid points uniform on the unit disk.
inline PointSample sample_iid_disk(int n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("sample_iid_disk: n must be >= 1");
  Rng rng = Rng::for_replica(seed, 0);
  PointSample out;
  out.ensemble = EnsembleSpec(Family::iid_disk, n);
  out.seed = seed;
  out.points.resize(n);
  for (int k = 0; k < n; ++k) {
    double r = std::sqrt(rng.uniform());
    double t = 2.0 * std::numbers::pi * rng.uniform();
    out.points[static_cast<std::size_t>(k)] = std::polar(r, t);
  }
  return out;
}

// Haar unitary eigenvalues: orthonormalize an iid gaussian matrix with the
// positive-diagonal triangular convention, then take the spectrum.
inline PointSample sample_haar_unitary_eigs(int n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("sample_haar_unitary_eigs: n must be >= 1");
  Rng rng = Rng::for_replica(seed, 0);
  ComplexMatrix g(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = rng.complex_gaussian();
  ComplexMatrix q = orthonormalize_columns(g);
  EigResult eig = eigenvalues(q);
  return PointSample{std::move(eig.eigenvalues), EnsembleSpec(Family::unitary, n), seed};
}

// Uniform dispatch used by the Monte Carlo layer.
inline PointSample sample_ensemble(const EnsembleSpec& ens, std::uint64_t seed) {
  switch (ens.family) {
    case Family::ginibre: return sample_ginibre_eigs(ens.n, seed);
    case Family::bergman: return sample_bergman(ens.n, seed);
    case Family::unitary: return sample_haar_unitary_eigs(ens.n, seed);
    case Family::iid_disk: return sample_iid_disk(ens.n, seed);
  }
  throw UnsupportedEnsembleError("sample_ensemble: unknown family");
}

}  // namespace circlaw
