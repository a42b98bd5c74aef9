#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <mutex>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "circlaw/kernels.hpp"
#include "circlaw/matrix.hpp"
#include "circlaw/rational.hpp"
#include "circlaw/surjections.hpp"

namespace circlaw {

// Weakly decreasing nonnegative parts, trailing zeros stripped.
struct Partition {
  std::vector<int> parts;

  Partition() = default;
  Partition(std::initializer_list<int> p) : parts(p) { normalize(); }
  explicit Partition(std::vector<int> p) : parts(std::move(p)) { normalize(); }

  void normalize() {
    for (std::size_t i = 1; i < parts.size(); ++i)
      if (parts[i] > parts[i - 1] || parts[i] < 0)
        throw std::invalid_argument("partition parts must be weakly decreasing and >= 0");
    while (!parts.empty() && parts.back() == 0) parts.pop_back();
  }

  int length() const { return static_cast<int>(parts.size()); }
  long weight() const {
    long w = 0;
    for (int p : parts) w += p;
    return w;
  }
  int part(int i) const {  // 1-based, zero beyond the length
    return (i >= 1 && i <= length()) ? parts[static_cast<std::size_t>(i - 1)] : 0;
  }

  auto operator<=>(const Partition&) const = default;
};

// Multiplicity vector of a power-sum product: mult[j-1] copies of p_j.
struct PowerSumProfile {
  std::vector<int> mult;

  PowerSumProfile() = default;
  PowerSumProfile(std::initializer_list<int> m) : mult(m) { validate(); }
  explicit PowerSumProfile(std::vector<int> m) : mult(std::move(m)) { validate(); }

  void validate() const {
    for (int a : mult)
      if (a < 0) throw std::invalid_argument("power sum multiplicities must be >= 0");
  }
  long degree() const {
    long d = 0;
    for (std::size_t j = 0; j < mult.size(); ++j) d += static_cast<long>(j + 1) * mult[j];
    return d;
  }
  bool operator==(const PowerSumProfile& o) const {
    std::size_t n = std::max(mult.size(), o.mult.size());
    for (std::size_t j = 0; j < n; ++j) {
      int a = j < mult.size() ? mult[j] : 0;
      int b = j < o.mult.size() ? o.mult[j] : 0;
      if (a != b) return false;
    }
    return true;
  }
};

using SchurExpansion = std::map<Partition, BigInt>;

class SchurConsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

constexpr long kSchurDegreeGuard = 40;

namespace detail {

// Multiply a Schur expansion by the power sum p_r: in beta-number form,
// move one bead from b to b+r for every b with b+r free; the sign is parity
// of the number of beads strictly between.
inline SchurExpansion multiply_power_sum(const SchurExpansion& in, int r) {
  SchurExpansion out;
  for (const auto& [lam, coef] : in) {
    const int len = lam.length();
    const int nbeads = len + r;  // enough room for any result
    std::vector<long> beta(static_cast<std::size_t>(nbeads));
    for (int i = 1; i <= nbeads; ++i)
      beta[static_cast<std::size_t>(i - 1)] = lam.part(i) + nbeads - i;
    // beta is strictly decreasing
    for (int i = 0; i < nbeads; ++i) {
      long b = beta[static_cast<std::size_t>(i)];
      long target = b + r;
      bool occupied = false;
      int between = 0;
      for (int t = 0; t < nbeads; ++t) {
        long v = beta[static_cast<std::size_t>(t)];
        if (v == target) {
          occupied = true;
          break;
        }
        if (v > b && v < target) ++between;
      }
      if (occupied) continue;
      std::vector<long> nb = beta;
      nb[static_cast<std::size_t>(i)] = target;
      std::sort(nb.begin(), nb.end(), std::greater<>());
      std::vector<int> parts(static_cast<std::size_t>(nbeads));
      for (int t = 1; t <= nbeads; ++t)
        parts[static_cast<std::size_t>(t - 1)] = static_cast<int>(nb[static_cast<std::size_t>(t - 1)] - (nbeads - t));
      Partition mu(std::move(parts));
      BigInt term = (between % 2 == 0) ? coef : -coef;
      auto& slot = out[mu];
      slot += term;
      if (slot == 0) out.erase(mu);
    }
  }
  return out;
}

}  // namespace detail

// Expansion of prod_j p_j^{a_j} in the Schur basis; the coefficients are the
// integer character sums of the symmetric group. Memoized per profile.
inline SchurExpansion power_sums_to_schur(const PowerSumProfile& profile) {
  if (profile.degree() > kSchurDegreeGuard)
    throw ComplexityError("power sum profile degree " + std::to_string(profile.degree()) +
                          " above guard " + std::to_string(kSchurDegreeGuard));
  static std::map<std::vector<int>, SchurExpansion> memo;
  static std::mutex mtx;
  std::vector<int> key = profile.mult;
  while (!key.empty() && key.back() == 0) key.pop_back();
  {
    std::lock_guard<std::mutex> lock(mtx);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
  }
  SchurExpansion acc;
  acc[Partition{}] = 1;
  for (std::size_t j = 0; j < key.size(); ++j)
    for (int c = 0; c < key[j]; ++c) acc = detail::multiply_power_sum(acc, static_cast<int>(j + 1));
  std::lock_guard<std::mutex> lock(mtx);
  return memo.emplace(std::move(key), std::move(acc)).first->second;
}

// delta_{ab} prod_j j^{a_j} a_j!, the gaussian moment, as an exact integer.
inline BigInt gaussian_limit_moment_exact(const PowerSumProfile& a, const PowerSumProfile& b) {
  if (!(a == b)) return BigInt(0);
  BigInt out(1);
  for (std::size_t j = 0; j < a.mult.size(); ++j) {
    out *= big_pow(BigInt(static_cast<long>(j + 1)), static_cast<unsigned long>(a.mult[j]));
    BigInt fact;
    mpz_fac_ui(fact.get_mpz_t(), static_cast<unsigned long>(a.mult[j]));
    out *= fact;
  }
  return out;
}

inline double gaussian_limit_moment(const PowerSumProfile& a, const PowerSumProfile& b) {
  return gaussian_limit_moment_exact(a, b).get_d();
}

// The inner product making Schur functions orthonormal, computed two ways:
// expansion dot product and the closed form delta_{ab} prod j^{a_j} a_j!.
// Disagreement raises, agreement returns the exact integer.
inline BigInt schur_inner(const PowerSumProfile& a, const PowerSumProfile& b) {
  auto ea = power_sums_to_schur(a);
  auto eb = power_sums_to_schur(b);
  BigInt dot(0);
  for (const auto& [lam, ca] : ea) {
    auto it = eb.find(lam);
    if (it != eb.end()) dot += ca * it->second;
  }
  BigInt closed = gaussian_limit_moment_exact(a, b);
  if (dot != closed)
    throw SchurConsistencyError("schur_inner routes disagree: " + dot.get_str() + " vs " +
                                closed.get_str());
  return dot;
}

// log E_n[ s_lambda conj(s_pi) ] for the SPP ensemble (K_n, mu_n):
// delta_{lambda pi} prod_{l=1..n} M(n, 2(lambda_l + n - l)) / M(n, 2(n - l)),
// accumulated as exact consecutive-moment steps in log space. Returns -inf
// for lambda != pi.
inline double log_expected_schur_pair(const Partition& lambda, const Partition& pi,
                                      const EnsembleSpec& ens, int n) {
  if (lambda.length() > n)
    throw std::invalid_argument("expected_schur_pair needs len(lambda) <= n");
  if (!(lambda == pi)) return -std::numeric_limits<double>::infinity();
  double acc = 0.0;
  for (int l = 1; l <= lambda.length(); ++l)
    for (int t = 1; t <= lambda.part(l); ++t)
      acc += std::log(radial_moment_step(ens.family, n, static_cast<long>(n) - l + t));
  return acc;
}

inline double expected_schur_pair(const Partition& lambda, const Partition& pi,
                                  const EnsembleSpec& ens, int n) {
  double lg = log_expected_schur_pair(lambda, pi, ens, n);
  return std::isinf(lg) ? 0.0 : std::exp(lg);
}

// E_n[ prod p_j^{a_j} conj(p_j)^{b_j} ] by Schur expansion; real by rotation
// invariance. Requires n at least the degree of both profiles so the
// expansion coefficients are n-stable.
inline double exact_joint_moment(const PowerSumProfile& a, const PowerSumProfile& b,
                                 const EnsembleSpec& ens, int n) {
  long da = a.degree(), db = b.degree();
  if (da > kSchurDegreeGuard || db > kSchurDegreeGuard)
    throw ComplexityError("profile degree above guard");
  if (da != db) return 0.0;
  if (n < da)
    throw std::invalid_argument("exact_joint_moment needs n >= profile degree");
  auto ea = power_sums_to_schur(a);
  auto eb = power_sums_to_schur(b);
  double acc = 0.0;
  for (const auto& [lam, ca] : ea) {
    auto it = eb.find(lam);
    if (it == eb.end()) continue;
    acc += ca.get_d() * it->second.get_d() *
           std::exp(log_expected_schur_pair(lam, lam, ens, n));
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Schur evaluation at concrete points
// ---------------------------------------------------------------------------

namespace detail {

inline Complex vandermonde_det(std::span<const Complex> z) {
  Complex prod = 1.0;
  for (std::size_t i = 0; i < z.size(); ++i)
    for (std::size_t j = i + 1; j < z.size(); ++j) prod *= (z[i] - z[j]);
  return prod;
}

inline Complex ipow(Complex z, long k) {
  Complex r = 1.0;
  while (k-- > 0) r *= z;
  return r;
}

// Jacobi-Trudi in complete homogeneous sums, themselves built from the power
// sums of the points by the Newton recurrence k h_k = sum p_i h_{k-i}.
inline Complex schur_jacobi_trudi(const Partition& lambda, std::span<const Complex> z) {
  const int len = lambda.length();
  if (len == 0) return 1.0;
  const int hmax = lambda.part(1) + len;
  std::vector<Complex> p(static_cast<std::size_t>(hmax) + 1, 0.0);
  for (int i = 1; i <= hmax; ++i)
    for (const auto& zz : z) p[static_cast<std::size_t>(i)] += ipow(zz, i);
  std::vector<Complex> h(static_cast<std::size_t>(hmax) + 1, 0.0);
  h[0] = 1.0;
  for (int k = 1; k <= hmax; ++k) {
    Complex acc = 0.0;
    for (int i = 1; i <= k; ++i) acc += p[static_cast<std::size_t>(i)] * h[static_cast<std::size_t>(k - i)];
    h[static_cast<std::size_t>(k)] = acc / static_cast<double>(k);
  }
  ComplexMatrix m(len);
  for (int i = 1; i <= len; ++i)
    for (int j = 1; j <= len; ++j) {
      int idx = lambda.part(i) - i + j;
      m(i - 1, j - 1) = (idx < 0) ? Complex(0.0) : (idx > hmax ? Complex(0.0) : h[static_cast<std::size_t>(idx)]);
    }
  return lu_det(m);
}

}  // namespace detail

// s_lambda(z_1..z_n) by the bialternant ratio det(z_k^{lambda_l + n - l}) /
// det(z_k^{n - l}); falls back to Jacobi-Trudi when the Vandermonde
// denominator is ill-conditioned (coincident or nearly coincident points).
inline Complex schur_eval(const Partition& lambda, std::span<const Complex> z) {
  const int n = static_cast<int>(z.size());
  if (lambda.length() > n)
    throw std::invalid_argument("schur_eval needs len(lambda) <= number of points");
  if (lambda.weight() == 0) return 1.0;
  double scale = 0.0;
  for (const auto& zz : z) scale = std::max(scale, std::abs(zz));
  double min_gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < z.size(); ++i)
    for (std::size_t j = i + 1; j < z.size(); ++j)
      min_gap = std::min(min_gap, std::abs(z[i] - z[j]));
  bool use_bialternant = (n >= 2) ? (min_gap > 1e-8 * std::max(1.0, scale)) : true;
  if (use_bialternant) {
    ComplexMatrix num(n);
    for (int k = 0; k < n; ++k)
      for (int l = 1; l <= n; ++l)
        num(k, l - 1) = detail::ipow(z[static_cast<std::size_t>(k)], lambda.part(l) + n - l);
    Complex denom = detail::vandermonde_det(z);
    Complex numerator = lu_det(num);
    Complex val = numerator / denom;
    if (std::isfinite(val.real()) && std::isfinite(val.imag())) return val;
  }
  Complex val = detail::schur_jacobi_trudi(lambda, z);
  if (!std::isfinite(val.real()) || !std::isfinite(val.imag()))
    throw std::runtime_error("schur_eval: both evaluation paths failed");
  return val;
}

// direct evaluation of prod_j p_j(z)^{a_j}
inline Complex power_sum_product(const PowerSumProfile& profile, std::span<const Complex> z) {
  Complex out = 1.0;
  for (std::size_t j = 0; j < profile.mult.size(); ++j) {
    if (profile.mult[j] == 0) continue;
    Complex pj = 0.0;
    for (const auto& zz : z) pj += detail::ipow(zz, static_cast<long>(j + 1));
    for (int c = 0; c < profile.mult[j]; ++c) out *= pj;
  }
  return out;
}

}  // namespace circlaw
