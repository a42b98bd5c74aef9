#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "circlaw/numeric.hpp"

namespace circlaw {

enum class Family { ginibre, bergman, unitary, iid_disk };

inline const char* family_name(Family f) {
  switch (f) {
    case Family::ginibre: return "ginibre";
    case Family::bergman: return "bergman";
    case Family::unitary: return "unitary";
    case Family::iid_disk: return "iid_disk";
  }
  return "?";
}

inline Family family_from_name(const std::string& s) {
  if (s == "ginibre") return Family::ginibre;
  if (s == "bergman") return Family::bergman;
  if (s == "unitary") return Family::unitary;
  if (s == "iid_disk") return Family::iid_disk;
  throw std::invalid_argument("unknown ensemble family: " + s);
}

// A rotation invariant ensemble is a pair (reference measure, n).
struct EnsembleSpec {
  Family family = Family::ginibre;
  int n = 1;

  EnsembleSpec() = default;
  EnsembleSpec(Family f, int n_) : family(f), n(n_) {
    if (n_ < 1) throw std::invalid_argument("ensemble size n must be >= 1");
  }
};

class UnsupportedEnsembleError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// log M(n, k) with M(n, k) = int |z|^k dmu_n(z), k even:
//   ginibre (mu_n = complex gaussian, variance 1/n):  M(n, 2l) = l! / n^l
//   bergman (mu uniform on the unit disk):            M(2l) = 1/(l+1)
//   unitary (mu uniform on the unit circle):          M(2l) = 1
inline double log_radial_moment(Family fam, int n, long k) {
  if (k < 0 || k % 2 != 0) throw std::invalid_argument("radial moment needs even k >= 0");
  long l = k / 2;
  switch (fam) {
    case Family::ginibre:
      return std::lgamma(static_cast<double>(l) + 1.0) - l * std::log(static_cast<double>(n));
    case Family::bergman:
    case Family::iid_disk:
      return -std::log(static_cast<double>(l) + 1.0);
    case Family::unitary:
      return 0.0;
  }
  throw UnsupportedEnsembleError("radial moment: unsupported family");
}

// Exact consecutive-moment ratio M(n,2l)/M(n,2l-2); products of these avoid
// lgamma noise when only ratios are needed.
inline double radial_moment_step(Family fam, int n, long l) {
  if (l < 1) throw std::invalid_argument("radial_moment_step needs l >= 1");
  switch (fam) {
    case Family::ginibre: return static_cast<double>(l) / static_cast<double>(n);
    case Family::bergman:
    case Family::iid_disk: return static_cast<double>(l) / static_cast<double>(l + 1);
    case Family::unitary: return 1.0;
  }
  throw UnsupportedEnsembleError("radial_moment_step: unsupported family");
}

struct RadialMomentTable {
  EnsembleSpec ensemble;
  std::vector<double> log_values;  // log M(n, 2l), l = 0..L

  static RadialMomentTable build(const EnsembleSpec& ens, int max_l) {
    RadialMomentTable t;
    t.ensemble = ens;
    t.log_values.resize(max_l + 1);
    t.log_values[0] = 0.0;  // probability reference measure
    for (int l = 1; l <= max_l; ++l)
      t.log_values[l] = t.log_values[l - 1] + std::log(radial_moment_step(ens.family, ens.n, l));
    return t;
  }
};

// Projection kernel K_n(z, wbar) = sum_{l<n} c_{n,l} (z wbar)^l with
// c_{n,l} = 1 / M(n, 2l).
struct ProjectionKernel {
  EnsembleSpec ensemble;

  explicit ProjectionKernel(const EnsembleSpec& ens) : ensemble(ens) {
    if (ens.family == Family::iid_disk)
      throw UnsupportedEnsembleError("iid_disk has no projection kernel");
  }

  double log_coefficient(int l) const {
    return -log_radial_moment(ensemble.family, ensemble.n, 2L * l);
  }
};

// One-point intensity per unit area at z: (1/n) K_n(z, zbar) * (dmu_n/d^2z),
// evaluated in log space off the running maximum term. Integrates to 1 over
// the plane. Defined for the two families with a planar reference density.
inline double kernel_diag_density(const EnsembleSpec& ens, std::complex<double> z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
    throw std::invalid_argument("kernel_diag_density: non-finite point");
  const int n = ens.n;
  const double r2 = std::norm(z);
  switch (ens.family) {
    case Family::ginibre: {
      // (1/pi) e^{-n|z|^2} sum_{l<n} (n|z|^2)^l / l!
      if (r2 == 0.0) return 1.0 / std::numbers::pi;
      const double log_u = std::log(static_cast<double>(n) * r2);
      double lg = 0.0, max_log = 0.0;
      std::vector<double> logs(static_cast<std::size_t>(n));
      for (int l = 0; l < n; ++l) {
        if (l > 0) lg += std::log(static_cast<double>(l));
        logs[static_cast<std::size_t>(l)] = l * log_u - lg;
        max_log = std::max(max_log, logs[static_cast<std::size_t>(l)]);
      }
      double s = 0.0;
      for (double l : logs) s += std::exp(l - max_log);
      return std::exp(max_log - n * r2 + std::log(s)) / std::numbers::pi;
    }
    case Family::bergman: {
      // (1/(n pi)) sum_{l<n} (l+1) |z|^{2l} on the unit disk
      if (r2 > 1.0) return 0.0;
      double s = 0.0, p = 1.0;
      for (int l = 0; l < n; ++l) {
        s += (l + 1) * p;
        p *= r2;
      }
      return s / (n * std::numbers::pi);
    }
    default:
      throw UnsupportedEnsembleError("kernel_diag_density: needs a planar density");
  }
}

// Ratio sequence M(n, 2n+2m) / M(n, 2n) over the given n values. Telescoped
// closed forms per family: (n+1)...(n+m)/n^m for ginibre (kept as a product
// of exact steps so large m cannot overflow), (n+1)/(n+m+1) for bergman,
// and identically 1 for unitary.
inline std::vector<double> check_moment_condition(Family fam, int m,
                                                  const std::vector<int>& n_list) {
  std::vector<double> out;
  out.reserve(n_list.size());
  for (int n : n_list) {
    if (2L * n + 2L * m < 0) throw std::invalid_argument("moment condition: 2n+2m must be >= 0");
    double ratio = 1.0;
    switch (fam) {
      case Family::unitary:
        break;
      case Family::bergman:
      case Family::iid_disk:
        ratio = (n + 1.0) / (n + m + 1.0);
        break;
      case Family::ginibre:
        if (m >= 0)
          for (long l = n + 1; l <= static_cast<long>(n) + m; ++l)
            ratio *= radial_moment_step(fam, n, l);
        else
          for (long l = static_cast<long>(n) + m + 1; l <= n; ++l)
            ratio /= radial_moment_step(fam, n, l);
        break;
    }
    out.push_back(ratio);
  }
  return out;
}

}  // namespace circlaw
