#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "circlaw/ensembles.hpp"
#include "circlaw/kernels.hpp"
#include "circlaw/limits.hpp"
#include "circlaw/numeric.hpp"
#include "circlaw/quadrature.hpp"
#include "circlaw/stats.hpp"
#include "circlaw/test_function.hpp"

namespace circlaw {

// E log |p_n(z)| for a rotation invariant ensemble. The angular average of
// log|z - r e^{i theta}| is log max(|z|, r), so
//   E log|p_n(z)| = sum_k E log max(|z|, R_k)
//                 = sum_k E log R_k + int_0^{|z|} Fbar(r)/r dr,
// with Fbar(r) = sum_k P(R_k <= r). The integral is tabulated once on a
// radial grid and evaluated by cubic Hermite interpolation (the derivative
// Fbar(a)/a is available exactly).
class ExpectedLogAbs {
 public:
  ExpectedLogAbs(const EnsembleSpec& ens, double a_max = 3.0, int intervals = 4096)
      : ens_(ens), a_max_(a_max), m_(intervals) {
    if (ens.family != Family::ginibre && ens.family != Family::bergman)
      throw UnsupportedEnsembleError("expected_log_abs: only ginibre and bergman");
    const int n = ens_.n;
    base_ = 0.0;
    if (ens_.family == Family::ginibre) {
      for (int k = 0; k < n; ++k)
        base_ += 0.5 * (digamma(k + 1.0) - std::log(static_cast<double>(n)));
    } else {
      for (int k = 0; k < n; ++k) base_ -= 0.5 / (k + 1.0);
    }
    h_ = a_max_ / m_;
    w_.assign(static_cast<std::size_t>(m_) + 1, 0.0);
    d_.assign(static_cast<std::size_t>(m_) + 1, 0.0);
    const auto& rule = gauss_legendre(8);
    double acc = 0.0;
    for (int i = 0; i <= m_; ++i) d_[static_cast<std::size_t>(i)] = integrand(i * h_) * h_;
    for (int i = 0; i < m_; ++i) {
      double a = i * h_, b = a + h_;
      double mid = 0.5 * (a + b), half = 0.5 * h_;
      double s = 0.0;
      for (std::size_t q = 0; q < rule.nodes.size(); ++q)
        s += rule.weights[q] * integrand(mid + half * rule.nodes[q]);
      acc += half * s;
      w_[static_cast<std::size_t>(i) + 1] = acc;
    }
  }

  double operator()(double radius) const {
    if (!(radius >= 0.0)) throw std::invalid_argument("expected_log_abs: bad radius");
    if (radius >= a_max_)  // Fbar saturates at n well before a_max
      return base_ + w_.back() + ens_.n * std::log(radius / a_max_);
    int i = std::min(static_cast<int>(radius / h_), m_ - 1);
    double a = i * h_;
    double t = (radius - a) / h_;
    double w0 = w_[static_cast<std::size_t>(i)], w1 = w_[static_cast<std::size_t>(i) + 1];
    double d0 = d_[static_cast<std::size_t>(i)], d1 = d_[static_cast<std::size_t>(i) + 1];
    double t2 = t * t, t3 = t2 * t;
    double w = (2 * t3 - 3 * t2 + 1) * w0 + (t3 - 2 * t2 + t) * d0 +
               (-2 * t3 + 3 * t2) * w1 + (t3 - t2) * d1;
    return base_ + w;
  }

  const EnsembleSpec& ensemble() const { return ens_; }

 private:
  double integrand(double r) const {  // Fbar(r) / r, continuous at 0
    if (r <= 0.0) return 0.0;
    const int n = ens_.n;
    double fbar;
    if (ens_.family == Family::ginibre) {
      fbar = n - ginibre_expected_exceed(n, r);
    } else if (r >= 1.0) {
      fbar = n;
    } else {
      // sum_{k<n} r^{2k+2}
      double r2 = r * r;
      fbar = (std::abs(1.0 - r2) < 1e-12) ? static_cast<double>(n)
                                          : r2 * (1.0 - std::pow(r2, n)) / (1.0 - r2);
    }
    return fbar / r;
  }

  EnsembleSpec ens_;
  double a_max_;
  int m_;
  double h_ = 0.0;
  double base_ = 0.0;       // sum_k E log R_k
  std::vector<double> w_;   // cumulative integral at the grid nodes
  std::vector<double> d_;   // integrand * h at the grid nodes (hermite slopes)
};

inline double expected_log_abs_pn(Cplx z, const ExpectedLogAbs& table) {
  return table(std::abs(z));
}

struct GridSpec {
  Cplx center = 0.0;
  double half_width = 1.0;
  int resolution = 256;

  double cell() const { return 2.0 * half_width / resolution; }
  // midpoint-rule node (i, j), i indexing x and j indexing y
  Cplx node(int i, int j) const {
    double h = cell();
    return center + Cplx(-half_width + (i + 0.5) * h, -half_width + (j + 0.5) * h);
  }
};

// h_n on a grid; masked entries mark grid points that coincide with an
// eigenvalue (log is -inf there).
struct FieldGrid {
  GridSpec spec;
  int n = 0;
  std::uint64_t seed = 0;
  std::vector<double> values;  // row-major, index j * resolution + i
  std::vector<std::uint8_t> mask;

  double& at(int i, int j) { return values[static_cast<std::size_t>(j) * spec.resolution + i]; }
  double at(int i, int j) const {
    return values[static_cast<std::size_t>(j) * spec.resolution + i];
  }
  bool masked(int i, int j) const {
    return mask[static_cast<std::size_t>(j) * spec.resolution + i] != 0;
  }
  double mask_fraction() const {
    std::size_t c = 0;
    for (auto m : mask) c += m;
    return static_cast<double>(c) / static_cast<double>(mask.size());
  }
};

inline FieldGrid field_grid(const PointSample& sample, const GridSpec& spec,
                            const ExpectedLogAbs& table) {
  FieldGrid out;
  out.spec = spec;
  out.n = static_cast<int>(sample.points.size());
  out.seed = sample.seed;
  const int res = spec.resolution;
  out.values.assign(static_cast<std::size_t>(res) * res, 0.0);
  out.mask.assign(static_cast<std::size_t>(res) * res, 0);
  for (int j = 0; j < res; ++j)
    for (int i = 0; i < res; ++i) {
      Cplx z = spec.node(i, j);
      // sum log|z - z_k| = (1/2) sum log|z - z_k|^2, accumulated as chunked
      // products of squared distances to keep the log count low without
      // over- or underflowing
      double acc = 0.0;
      double prod = 1.0;
      int in_chunk = 0;
      for (const auto& zk : sample.points) {
        prod *= std::norm(z - zk);
        if (++in_chunk == 16 || prod < 1e-250 || prod > 1e250) {
          acc += std::log(prod);
          prod = 1.0;
          in_chunk = 0;
        }
      }
      if (in_chunk > 0) acc += std::log(prod);
      double v = 0.5 * acc - table(std::abs(z));
      std::size_t idx = static_cast<std::size_t>(j) * res + i;
      if (std::isfinite(v)) {
        out.values[idx] = v;
      } else {
        out.mask[idx] = 1;
      }
    }
  return out;
}

// Conservative midpoint-rule error budget for the pairing integral: the
// dominant contribution is the cells at distance O(h) from an eigenvalue,
// each worth O(max|lap f| h^2 (1+|log h|)), with about n R^2 eigenvalues in
// the support.
inline double pairing_grid_tolerance(int n, double cell, double max_lap, double support_radius) {
  double n_support = std::max(8.0, n * support_radius * support_radius);
  return 3.0 * max_lap * cell * cell * (1.0 + std::abs(std::log(cell))) * n_support;
}

struct PairingReport {
  MCEstimate pairing_variance;      // Var of (1/2pi) <lap f, h_n>
  double predicted_total = 0.0;     // predict_variance(f).total
  double identity_worst = 0.0;      // max per-replica |grid route - direct route| of (1/2pi)<...>
  double grid_tolerance = 0.0;      // budget for the identity at this resolution
  double mean_mask_fraction = 0.0;
  int replicas = 0;
};

// Pairs h_n with lap f on a midpoint grid over the support of f and checks
// the distributional identity <lap f, h_n> = 2 pi (X_n(f) - E X_n(f)) per
// replica. f must be compactly supported strictly inside the unit disk with
// an evaluable Laplacian.
inline PairingReport pair_with_test_function(const TestFunction& f, const EnsembleSpec& ens,
                                             int replicas, int resolution, std::uint64_t seed,
                                             int threads = 0) {
  if (!f.support_radius() || !(*f.support_radius() < 1.0))
    throw std::invalid_argument(
        "pairing needs a test function compactly supported inside the unit disk");
  if (!f.has_laplacian())
    throw CapabilityError("pairing needs an evaluable Laplacian");
  const double support = *f.support_radius();
  ExpectedLogAbs table(ens);
  GridSpec spec;
  spec.center = 0.0;
  spec.half_width = support;  // lap f vanishes outside
  spec.resolution = resolution;
  const double h = spec.cell();
  const double area = h * h;

  // precompute lap f on the grid and E X_n(f) = n int f density
  const int res = spec.resolution;
  std::vector<double> lap(static_cast<std::size_t>(res) * res, 0.0);
  double max_lap = 0.0;
  for (int j = 0; j < res; ++j)
    for (int i = 0; i < res; ++i) {
      double v = f.laplacian(spec.node(i, j));
      lap[static_cast<std::size_t>(j) * res + i] = v;
      max_lap = std::max(max_lap, std::abs(v));
    }
  double mean_stat = ens.n * integrate_disk(
                                 [&](double r, double t) {
                                   Cplx z = std::polar(r, t);
                                   return f.eval(z).real() *
                                          kernel_diag_density(ens, z);
                                 },
                                 1e-10, support);

  struct Row {
    double pairing = 0.0, direct = 0.0, mask = 0.0;
  };
  auto rows = run_replicas<Row>(
      replicas,
      [&](int r) -> Row {
        PointSample s = sample_ensemble(ens, derive_stream(seed, static_cast<std::uint64_t>(r)));
        FieldGrid grid = field_grid(s, spec, table);
        double acc = 0.0;
        for (int j = 0; j < res; ++j)
          for (int i = 0; i < res; ++i) {
            if (grid.masked(i, j)) continue;
            acc += lap[static_cast<std::size_t>(j) * res + i] * grid.at(i, j);
          }
        acc *= area;
        double xf = 0.0;
        for (const auto& z : s.points) xf += f.eval(z).real();
        return {acc / (2.0 * std::numbers::pi), xf - mean_stat, grid.mask_fraction()};
      },
      threads);

  PairingReport rep;
  rep.replicas = replicas;
  rep.grid_tolerance = pairing_grid_tolerance(ens.n, h, max_lap, support) /
                       (2.0 * std::numbers::pi);
  rep.predicted_total = predict_variance(f).total;
  std::vector<double> vals(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    vals[i] = rows[i].pairing;
    rep.identity_worst = std::max(rep.identity_worst, std::abs(rows[i].pairing - rows[i].direct));
    rep.mean_mask_fraction += rows[i].mask;
  }
  rep.mean_mask_fraction /= static_cast<double>(rows.size());

  // sample variance of the pairing values with jackknife error
  const double rd = static_cast<double>(vals.size());
  double s1 = 0.0, s2 = 0.0;
  for (double v : vals) {
    s1 += v;
    s2 += v * v;
  }
  double var = (s2 - s1 * s1 / rd) / (rd - 1.0);
  double theta_bar = 0.0;
  std::vector<double> theta(vals.size());
  for (std::size_t i = 0; i < vals.size(); ++i) {
    double s1i = s1 - vals[i], s2i = s2 - vals[i] * vals[i];
    theta[i] = (s2i - s1i * s1i / (rd - 1.0)) / (rd - 2.0);
    theta_bar += theta[i];
  }
  theta_bar /= rd;
  double ss = 0.0;
  for (double t : theta) ss += (t - theta_bar) * (t - theta_bar);
  rep.pairing_variance = {var, std::sqrt((rd - 1.0) / rd * ss), static_cast<int>(vals.size())};
  return rep;
}

}  // namespace circlaw
