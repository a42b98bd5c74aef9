#pragma once

#include <algorithm>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "circlaw/kernels.hpp"
#include "circlaw/rational.hpp"
#include "circlaw/surjections.hpp"

namespace circlaw {

// One monomial statistic sum_k z_k^alpha zbar_k^beta.
struct MonomialStat {
  int alpha = 0;
  int beta = 0;

  MonomialStat() = default;
  MonomialStat(int a, int b) : alpha(a), beta(b) {
    if (a < 0 || b < 0 || a + b < 1)
      throw std::invalid_argument("monomial statistic needs alpha, beta >= 0, alpha+beta >= 1");
  }
};

// Flow data of a cyclic kernel integral under rotation invariance:
// gamma_j = beta_j - alpha_j, eta_j its prefix sums, exponents q_j = l + eta_j.
// The term survives only if every q_j lies in [0, n-1]; eta_m = 0 whenever
// the total z and zbar degrees agree.
struct RotaryFlow {
  std::vector<long> gamma;
  std::vector<long> eta;
  long eta_min = 0;  // min(0, min_j eta_j)
  long eta_max = 0;  // max(0, max_j eta_j)
  long degree = 0;   // s = sum alpha_j = sum beta_j

  static RotaryFlow from(std::span<const MonomialStat> f) {
    RotaryFlow flow;
    long sa = 0, sb = 0, run = 0;
    flow.gamma.reserve(f.size());
    flow.eta.reserve(f.size());
    for (const auto& m : f) {
      sa += m.alpha;
      sb += m.beta;
      long g = static_cast<long>(m.beta) - m.alpha;
      run += g;
      flow.gamma.push_back(g);
      flow.eta.push_back(run);
      flow.eta_min = std::min(flow.eta_min, run);
      flow.eta_max = std::max(flow.eta_max, run);
    }
    flow.degree = (sa == sb) ? sa : -1;  // -1 marks an unbalanced list
    return flow;
  }
};

namespace detail {

// coefficients of prod_j (x + eta_j + 1) ... (x + eta_j + alpha_j) in x
inline std::vector<BigInt> rising_product_coeffs(std::span<const MonomialStat> f,
                                                 std::span<const long> eta) {
  std::vector<BigInt> poly = {BigInt(1)};
  for (std::size_t j = 0; j < f.size(); ++j) {
    for (int t = 1; t <= f[j].alpha; ++t) {
      BigInt c(eta[j] + t);
      poly.push_back(BigInt(0));
      for (std::size_t p = poly.size() - 1; p > 0; --p)
        poly[p] = poly[p - 1] + c * poly[p];
      poly[0] *= c;
    }
  }
  return poly;
}

}  // namespace detail

// Basic cumulant term for the Ginibre kernel:
//   Phi_m(f_1..f_m) = n^{-s} sum_{l=L0}^{L1} prod_j (l+eta_j+1)...(l+eta_j+alpha_j)
// with L0 = -min(0, min eta_j), L1 = n-1 - max(0, max eta_j). Exact rational.
// Zero when the total z and zbar degrees differ (rotation invariance) or the
// summation range is empty.
inline Rational phi_m(std::span<const MonomialStat> f, long n,
                      std::map<long, std::vector<Rational>>* power_sum_cache = nullptr) {
  if (f.empty()) throw std::invalid_argument("phi_m: empty monomial list");
  if (n < 1) throw std::invalid_argument("phi_m: n must be >= 1");
  RotaryFlow flow = RotaryFlow::from(f);
  if (flow.degree < 0) return Rational(0);
  const long s = flow.degree;
  if (s == 0) return Rational(0);
  const long l0 = -flow.eta_min;
  const long l1 = n - 1 - flow.eta_max;
  if (l0 > l1) return Rational(0);

  auto poly = detail::rising_product_coeffs(f, flow.eta);
  const int deg = static_cast<int>(poly.size()) - 1;
  auto sums_at = [&](long top) -> std::vector<Rational> {
    if (power_sum_cache) {
      auto it = power_sum_cache->find(top);
      if (it != power_sum_cache->end() && static_cast<int>(it->second.size()) > deg)
        return it->second;
      auto v = power_sums_upto(deg, top);
      (*power_sum_cache)[top] = v;
      return v;
    }
    return power_sums_upto(deg, top);
  };
  auto hi = sums_at(l1);
  auto lo = sums_at(l0 - 1);
  Rational acc(0);
  for (int p = 0; p <= deg; ++p)
    acc += Rational(poly[static_cast<std::size_t>(p)]) *
           (hi[static_cast<std::size_t>(p)] - lo[static_cast<std::size_t>(p)]);
  Rational scale(big_pow(BigInt(n), static_cast<unsigned long>(s)));
  return acc / scale;
}

// Literal summation over l; the independent route used to check the
// polynomial expansion above.
inline Rational phi_m_direct(std::span<const MonomialStat> f, long n) {
  RotaryFlow flow = RotaryFlow::from(f);
  if (flow.degree <= 0) return Rational(0);
  const long l0 = -flow.eta_min;
  const long l1 = n - 1 - flow.eta_max;
  BigInt acc(0);
  for (long l = l0; l <= l1; ++l) {
    BigInt term(1);
    for (std::size_t j = 0; j < f.size(); ++j)
      for (int t = 1; t <= f[j].alpha; ++t) term *= BigInt(l + flow.eta[j] + t);
    acc += term;
  }
  Rational out(acc);
  return out / Rational(big_pow(BigInt(n), static_cast<unsigned long>(flow.degree)));
}

constexpr int kMaxCumulantOrder = 8;

namespace detail {

inline void check_order(std::size_t k) {
  if (k < 1) throw std::invalid_argument("cumulant order must be >= 1");
  if (k > kMaxCumulantOrder)
    throw ComplexityError("cumulant order " + std::to_string(k) + " above the surjection guard " +
                          std::to_string(kMaxCumulantOrder));
}

inline std::vector<MonomialStat> aggregate(std::span<const MonomialStat> f,
                                           const std::vector<std::uint8_t>& sigma, int m) {
  std::vector<int> a(static_cast<std::size_t>(m), 0), b(static_cast<std::size_t>(m), 0);
  for (std::size_t i = 0; i < f.size(); ++i) {
    a[sigma[i]] += f[i].alpha;
    b[sigma[i]] += f[i].beta;
  }
  std::vector<MonomialStat> out(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) {
    out[static_cast<std::size_t>(j)].alpha = a[static_cast<std::size_t>(j)];
    out[static_cast<std::size_t>(j)].beta = b[static_cast<std::size_t>(j)];
  }
  return out;
}

}  // namespace detail

// Exact joint cumulant of the k monomial statistics for Ginibre(n):
//   Upsilon_k(Phi, f) = sum_{m=1..k} (-1)^{m-1}/m sum_{sigma:[k]->>[m]} Phi_m(sigma f),
// where (sigma f)_j multiplies the statistics mapped to slot j.
inline Rational upsilon_k(std::span<const MonomialStat> f, long n) {
  detail::check_order(f.size());
  const int k = static_cast<int>(f.size());
  std::map<long, std::vector<Rational>> cache;
  Rational total(0);
  for (int m = 1; m <= k; ++m) {
    Rational block(0);
    for (const auto& sigma : surjections(k, m)) {
      auto parts = detail::aggregate(f, sigma, m);
      block += phi_m(parts, n, &cache);
    }
    Rational w = make_rational((m % 2 == 1) ? 1 : -1, m);
    total += w * block;
  }
  return total;
}

// Generic master-formula evaluation in floating point for any ensemble with
// radial moments wired in the kernels module. Extension point; the exact
// rational path above is the Ginibre workhorse.
inline double master_phi(const EnsembleSpec& ens, std::span<const MonomialStat> f) {
  RotaryFlow flow = RotaryFlow::from(f);
  if (flow.degree < 0) return 0.0;
  const long n = ens.n;
  const long l0 = -flow.eta_min;
  const long l1 = n - 1 - flow.eta_max;
  double acc = 0.0;
  for (long l = l0; l <= l1; ++l) {
    double log_term = 0.0;
    for (std::size_t j = 0; j < f.size(); ++j) {
      long q = l + flow.eta[j];
      log_term += log_radial_moment(ens.family, ens.n, 2 * (q + f[j].alpha)) -
                  log_radial_moment(ens.family, ens.n, 2 * q);
    }
    acc += std::exp(log_term);
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Combinatorial functionals Lambda_k over surjections.
// ---------------------------------------------------------------------------

class HypothesisViolationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Quadratic functional family phi_m(y) = b0 + sum_j c_{m,j} y_j
// + sum_j d_{m,j} y_j^2 + sum_{j != j'} e_{m,j,j'} y_j y_{j'} whose
// coefficient sums are b0, m b1, m b2 and m(m-1) b11. The skew knobs
// redistribute coefficients across positions without changing the sums, so
// the closed form must be insensitive to them. A nonzero break_offset is
// added to the first linear coefficient for m >= 2, deliberately violating
// the proportionality hypothesis.
struct CombinedQuadSpec {
  Rational b0, b1, b2, b11;
  Rational skew_lin = Rational(0);
  Rational skew_quad = Rational(0);
  Rational skew_cross = Rational(0);
  Rational break_offset = Rational(0);

  Rational lin_coef(int m, int j) const {
    Rational c = b1 + skew_lin * Rational(2 * j - m - 1);
    if (j == 1 && m >= 2) c += break_offset;
    return c;
  }
  Rational quad_coef(int m, int j) const {
    return b2 + skew_quad * Rational(2 * j - m - 1);
  }
  // ordered pair (j, j'), j != j'; pattern (j-j')^2 recentred to sum zero
  Rational cross_coef(int m, int j, int jp) const {
    if (m < 2) return b11;
    Rational center = cross_center(m);
    return b11 + skew_cross * (Rational((j - jp) * (j - jp)) - center);
  }
  static Rational cross_center(int m) {
    // average of (j-j')^2 over ordered pairs: m(m+1)/6
    return make_rational(static_cast<long>(m) * (m + 1), 6);
  }

  // break_offset only perturbs m >= 2, so k = 1 stays within hypothesis
  bool hypothesis_ok(int k_max) const { return break_offset == 0 || k_max < 2; }
};

// Bilinear functional family on pairs (y, w): phi_m = sum_j p_{m,j} y_j w_j
// + sum_{j != j'} q_{m,j,j'} y_j w_{j'} with coefficient sums m b_plus and
// m(m-1) b_minus.
struct AlphaBetaSpec {
  Rational b_plus, b_minus;
  Rational skew_diag = Rational(0);
  Rational skew_cross = Rational(0);
  Rational break_offset = Rational(0);

  Rational diag_coef(int m, int j) const {
    Rational c = b_plus + skew_diag * Rational(2 * j - m - 1);
    if (j == 1 && m >= 2) c += break_offset;
    return c;
  }
  Rational cross_coef(int m, int j, int jp) const {
    if (m < 2) return b_minus;
    return b_minus + skew_cross * (Rational((j - jp) * (j - jp)) - CombinedQuadSpec::cross_center(m));
  }
  bool hypothesis_ok(int k_max) const { return break_offset == 0 || k_max < 2; }
};

namespace detail {

inline Rational lambda_weight(int m) { return make_rational((m % 2 == 1) ? 1 : -1, m); }

}  // namespace detail

// ----- brute force evaluations by full surjection enumeration -----
// The aggregated vectors are integers, so each per-m sum is accumulated in
// int64 feature sums and converted to rationals once.

inline Rational lambda_bruteforce_linear(std::span<const long> alpha) {
  detail::check_order(alpha.size());
  const int k = static_cast<int>(alpha.size());
  long long s = 0;
  for (long a : alpha) s += a;
  Rational total(0);
  for (int m = 1; m <= k; ++m) {
    // every surjection aggregates to total sum s
    long long sum = s * static_cast<long long>(surjections(k, m).size());
    total += detail::lambda_weight(m) * Rational(static_cast<long>(sum));
  }
  return total;
}

inline Rational lambda_bruteforce_quadratic(std::span<const long> alpha) {
  detail::check_order(alpha.size());
  const int k = static_cast<int>(alpha.size());
  std::vector<long long> y(static_cast<std::size_t>(k));
  Rational total(0);
  for (int m = 1; m <= k; ++m) {
    long long sum = 0;
    for (const auto& sigma : surjections(k, m)) {
      std::fill(y.begin(), y.begin() + m, 0LL);
      for (int i = 0; i < k; ++i) y[sigma[static_cast<std::size_t>(i)]] += alpha[static_cast<std::size_t>(i)];
      for (int j = 0; j < m; ++j) sum += y[static_cast<std::size_t>(j)] * y[static_cast<std::size_t>(j)];
    }
    total += detail::lambda_weight(m) * Rational(static_cast<long>(sum));
  }
  return total;
}

inline Rational lambda_bruteforce_etamax(std::span<const long> alpha) {
  detail::check_order(alpha.size());
  const int k = static_cast<int>(alpha.size());
  std::vector<long long> y(static_cast<std::size_t>(k));
  Rational total(0);
  for (int m = 1; m <= k; ++m) {
    long long sum = 0;
    for (const auto& sigma : surjections(k, m)) {
      std::fill(y.begin(), y.begin() + m, 0LL);
      for (int i = 0; i < k; ++i) y[sigma[static_cast<std::size_t>(i)]] += alpha[static_cast<std::size_t>(i)];
      long long run = 0, mx = y[0];
      for (int j = 0; j < m; ++j) {
        run += y[static_cast<std::size_t>(j)];
        if (j == 0 || run > mx) mx = run;
      }
      sum += mx;
    }
    total += detail::lambda_weight(m) * Rational(static_cast<long>(sum));
  }
  return total;
}

inline Rational lambda_bruteforce_combined(const CombinedQuadSpec& spec,
                                           std::span<const long> alpha) {
  detail::check_order(alpha.size());
  const int k = static_cast<int>(alpha.size());
  std::vector<long long> y(static_cast<std::size_t>(k));
  Rational total(0);
  for (int m = 1; m <= k; ++m) {
    // feature sums over all surjections onto [m]
    long long n_sigma = 0;
    long long f_lin = 0, f_lin_skew = 0, f_quad = 0, f_quad_skew = 0;
    long long f_cross = 0;          // sum_{j != j'} y_j y_j'
    long long f_cross_skew = 0;     // sum_{j != j'} (j-j')^2 y_j y_j'
    long long f_lin_first = 0;      // y_1 alone (break_offset target)
    for (const auto& sigma : surjections(k, m)) {
      std::fill(y.begin(), y.begin() + m, 0LL);
      for (int i = 0; i < k; ++i) y[sigma[static_cast<std::size_t>(i)]] += alpha[static_cast<std::size_t>(i)];
      ++n_sigma;
      long long s = 0, s2 = 0, js = 0, j2s = 0, jq = 0;
      for (int j = 0; j < m; ++j) {
        long long v = y[static_cast<std::size_t>(j)];
        long long pos = j + 1;
        s += v;
        s2 += v * v;
        js += pos * v;
        j2s += pos * pos * v;
        jq += (2 * pos - m - 1) * v * v;
        f_lin_skew += (2 * pos - m - 1) * v;
      }
      f_lin += s;
      f_quad += s2;
      f_quad_skew += jq;
      f_cross += s * s - s2;
      // sum_{j != j'} (j-j')^2 y_j y_j' = 2 (sum j^2 y_j)(sum y) - 2 (sum j y_j)^2
      f_cross_skew += 2 * j2s * s - 2 * js * js;
      f_lin_first += y[0];
    }
    Rational block = Rational(static_cast<long>(n_sigma)) * spec.b0;
    block += spec.b1 * Rational(static_cast<long>(f_lin));
    block += spec.skew_lin * Rational(static_cast<long>(f_lin_skew));
    block += spec.b2 * Rational(static_cast<long>(f_quad));
    block += spec.skew_quad * Rational(static_cast<long>(f_quad_skew));
    block += spec.b11 * Rational(static_cast<long>(f_cross));
    block += spec.skew_cross * (Rational(static_cast<long>(f_cross_skew)) -
                                CombinedQuadSpec::cross_center(m) * Rational(static_cast<long>(f_cross)));
    if (m >= 2) block += spec.break_offset * Rational(static_cast<long>(f_lin_first));
    total += detail::lambda_weight(m) * block;
  }
  return total;
}

inline Rational lambda_bruteforce_alphabeta(const AlphaBetaSpec& spec,
                                            std::span<const std::pair<long, long>> ab) {
  detail::check_order(ab.size());
  const int k = static_cast<int>(ab.size());
  std::vector<long long> y(static_cast<std::size_t>(k)), w(static_cast<std::size_t>(k));
  Rational total(0);
  for (int m = 1; m <= k; ++m) {
    long long f_diag = 0, f_diag_skew = 0, f_cross = 0, f_cross_skew = 0, f_diag_first = 0;
    for (const auto& sigma : surjections(k, m)) {
      std::fill(y.begin(), y.begin() + m, 0LL);
      std::fill(w.begin(), w.begin() + m, 0LL);
      for (int i = 0; i < k; ++i) {
        y[sigma[static_cast<std::size_t>(i)]] += ab[static_cast<std::size_t>(i)].first;
        w[sigma[static_cast<std::size_t>(i)]] += ab[static_cast<std::size_t>(i)].second;
      }
      long long sy = 0, sw = 0, dg = 0, jy = 0, jw = 0, j2y = 0, j2w = 0, dskew = 0;
      for (int j = 0; j < m; ++j) {
        long long a = y[static_cast<std::size_t>(j)], b = w[static_cast<std::size_t>(j)];
        long long pos = j + 1;
        sy += a;
        sw += b;
        dg += a * b;
        jy += pos * a;
        jw += pos * b;
        j2y += pos * pos * a;
        j2w += pos * pos * b;
        dskew += (2 * pos - m - 1) * a * b;
      }
      f_diag += dg;
      f_diag_skew += dskew;
      f_cross += sy * sw - dg;
      // sum_{j != j'} (j-j')^2 y_j w_j' = (sum j^2 y) sw - 2 (sum j y)(sum j w) + sy (sum j^2 w)
      f_cross_skew += j2y * sw - 2 * jy * jw + sy * j2w;
      f_diag_first += y[0] * w[0];
    }
    Rational block = spec.b_plus * Rational(static_cast<long>(f_diag));
    block += spec.skew_diag * Rational(static_cast<long>(f_diag_skew));
    block += spec.b_minus * Rational(static_cast<long>(f_cross));
    block += spec.skew_cross * (Rational(static_cast<long>(f_cross_skew)) -
                                CombinedQuadSpec::cross_center(m) * Rational(static_cast<long>(f_cross)));
    if (m >= 2) block += spec.break_offset * Rational(static_cast<long>(f_diag_first));
    total += detail::lambda_weight(m) * block;
  }
  return total;
}

// ----- closed forms -----

inline Rational lambda_closed_form_linear(std::span<const long> alpha, int k) {
  detail::check_order(static_cast<std::size_t>(k));
  return (k == 1) ? Rational(alpha[0]) : Rational(0);
}

inline Rational lambda_closed_form_quadratic(std::span<const long> alpha, int k) {
  detail::check_order(static_cast<std::size_t>(k));
  if (k == 1) return Rational(alpha[0] * alpha[0]);
  if (k == 2) return Rational(2 * alpha[0] * alpha[1]);
  return Rational(0);
}

inline Rational lambda_closed_form_combined(const CombinedQuadSpec& spec,
                                            std::span<const long> alpha, int k) {
  detail::check_order(static_cast<std::size_t>(k));
  if (!spec.hypothesis_ok(k))
    throw HypothesisViolationError("combined-quadratic coefficients violate the b_m = m b rule");
  if (k == 1)
    return spec.b0 + spec.b1 * Rational(alpha[0]) + spec.b2 * Rational(alpha[0] * alpha[0]);
  if (k == 2) return Rational(2) * (spec.b2 - spec.b11) * Rational(alpha[0] * alpha[1]);
  return Rational(0);
}

inline Rational lambda_closed_form_alphabeta(const AlphaBetaSpec& spec,
                                             std::span<const std::pair<long, long>> ab, int k) {
  detail::check_order(static_cast<std::size_t>(k));
  if (!spec.hypothesis_ok(k))
    throw HypothesisViolationError("alphabeta coefficients violate the b_m = m b rule");
  if (k == 1) return spec.b_plus * Rational(ab[0].first * ab[0].second);
  if (k == 2)
    return (spec.b_plus - spec.b_minus) *
           Rational(ab[0].first * ab[1].second + ab[1].first * ab[0].second);
  return Rational(0);
}

// For inputs summing to zero. The k = 2 constant is fixed by consistency
// with the exact cumulant engine (see the covariance identity below):
// assembling the k = 2 covariance from the quadratic/bilinear closed forms
// plus this one must reproduce max(0, beta1-alpha1) + alpha1 beta2 / s,
// which pins Lambda_2 = -|alpha_1| / 2.
inline Rational lambda_closed_form_etamax(std::span<const long> alpha, int k) {
  detail::check_order(static_cast<std::size_t>(k));
  long total = 0;
  for (long a : alpha) total += a;
  if (total != 0)
    throw HypothesisViolationError("etamax closed form needs sum(alpha) = 0");
  if (k == 2) return make_rational(-std::abs(alpha[0]), 2);
  return Rational(0);
}

// ---------------------------------------------------------------------------
// Asymptotics: Upsilon_k = n/(s+1) Lambda_k(1) + Lambda_k(phi) + O(1/n)
// ---------------------------------------------------------------------------

struct AsymptoticCumulant {
  Rational n_coefficient;
  Rational constant_term;
};

namespace detail {

// O(1) part of Phi_m for aggregated exponents (y, w), with the total degree
// s treated as an external parameter:
//   phi_m = -1/2 - max_j(eta_j) + (1/s) sum_j [eta_j y_j + C(y_j+1, 2)],
// eta_j the prefix sums of w - y. Split into the eta_max piece and the
// polynomial piece so the coefficient table is inspectable.
inline Rational phi_poly_part(std::span<const long> y, std::span<const long> w, long s) {
  Rational acc = make_rational(-1, 2);
  long run = 0;
  Rational inv_s = make_rational(1, s);
  for (std::size_t j = 0; j < y.size(); ++j) {
    run += w[j] - y[j];
    acc += inv_s * Rational(run * y[j] + (y[j] + 1) * y[j] / 2);
  }
  return acc;
}

inline Rational phi_eta_term(std::span<const long> y, std::span<const long> w) {
  long run = 0, mx = 0;
  for (std::size_t j = 0; j < y.size(); ++j) {
    run += w[j] - y[j];
    mx = std::max(mx, run);
  }
  return Rational(-mx);
}

}  // namespace detail

// Leading coefficient of n (zero for k >= 2) and the exact O(1) term of the
// joint cumulant of the k monomial statistics, assembled by surjection
// enumeration of the O(1) functional.
inline AsymptoticCumulant asymptotic_cumulant(std::span<const MonomialStat> f) {
  detail::check_order(f.size());
  const int k = static_cast<int>(f.size());
  long sa = 0, sb = 0;
  for (const auto& m : f) {
    sa += m.alpha;
    sb += m.beta;
  }
  if (sa != sb || sa < 1)
    throw std::invalid_argument("asymptotic_cumulant needs sum(alpha) = sum(beta) = s >= 1");
  const long s = sa;

  AsymptoticCumulant out;
  // Lambda_k(1) / (s+1): 1 for k = 1 and 0 beyond (linear functional)
  std::vector<long> e1(static_cast<std::size_t>(k), 0);
  e1[0] = 1;
  out.n_coefficient = lambda_bruteforce_linear(e1) * make_rational(1, s + 1);

  Rational total(0);
  std::vector<long> y(static_cast<std::size_t>(k)), w(static_cast<std::size_t>(k));
  for (int m = 1; m <= k; ++m) {
    Rational block(0);
    for (const auto& sigma : surjections(k, m)) {
      std::fill(y.begin(), y.begin() + m, 0L);
      std::fill(w.begin(), w.begin() + m, 0L);
      for (int i = 0; i < k; ++i) {
        y[sigma[static_cast<std::size_t>(i)]] += f[static_cast<std::size_t>(i)].alpha;
        w[sigma[static_cast<std::size_t>(i)]] += f[static_cast<std::size_t>(i)].beta;
      }
      std::span<const long> ys(y.data(), static_cast<std::size_t>(m));
      std::span<const long> ws(w.data(), static_cast<std::size_t>(m));
      block += detail::phi_poly_part(ys, ws, s) + detail::phi_eta_term(ys, ws);
    }
    total += detail::lambda_weight(m) * block;
  }
  out.constant_term = total;
  return out;
}

// Limiting covariance of the monomial statistics z^{a1} zbar^{b1} and
// z^{b2} zbar^{a2}: max(0, b1 - a1) + a1 b2 / s for a1 + a2 = b1 + b2 = s > 0,
// zero otherwise. Exact rational.
inline Rational monomial_cov_limit(int a1, int b1, int a2, int b2) {
  if (a1 < 0 || b1 < 0 || a2 < 0 || b2 < 0)
    throw std::invalid_argument("monomial_cov_limit: exponents must be >= 0");
  long s = static_cast<long>(a1) + a2;
  if (s != static_cast<long>(b1) + b2 || s <= 0) return Rational(0);
  Rational out(std::max(0, b1 - a1));
  out += make_rational(static_cast<long>(a1) * b2, s);
  return out;
}

// The two pieces the limit formula decomposes into for monomials:
// (1/pi) int_U dbar(z^{a1} zbar^{b1}) conj(dbar(z^{b2} zbar^{a2})) = a2 b1 / s,
// and the positive-frequency boundary sum max(0, a1 - b1).
inline Rational monomial_cov_interior_term(int a1, int b1, int a2, int b2) {
  long s = static_cast<long>(a1) + a2;
  if (s != static_cast<long>(b1) + b2 || s <= 0) return Rational(0);
  return make_rational(static_cast<long>(a2) * b1, s);
}

inline Rational monomial_cov_boundary_term(int a1, int b1, int a2, int b2) {
  long s = static_cast<long>(a1) + a2;
  if (s != static_cast<long>(b1) + b2 || s <= 0) return Rational(0);
  return Rational(std::max(0, a1 - b1));
}

}  // namespace circlaw
