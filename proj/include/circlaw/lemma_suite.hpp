#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <numeric>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "circlaw/cumulants.hpp"

namespace circlaw {

struct LemmaCheck {
  std::string lemma;
  int k = 0;
  long cases = 0;
  bool pass = false;
  std::string note;  // "hypothesis-violation" when the closed form refused
};

namespace detail {

// multisets (sorted tuples) over values[0..v-1], length k; Lambda_k is
// permutation symmetric so one representative per orbit suffices
template <class Fn>
void for_each_multiset(int v, int k, const Fn& fn) {
  std::vector<int> idx(static_cast<std::size_t>(k), 0);
  for (;;) {
    fn(idx);
    int pos = k - 1;
    while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == v - 1) --pos;
    if (pos < 0) return;
    int next = idx[static_cast<std::size_t>(pos)] + 1;
    for (int t = pos; t < k; ++t) idx[static_cast<std::size_t>(t)] = next;
  }
}

inline long long to_scaled_i64(const Rational& q, long long scale) {
  Rational scaled = q * Rational(static_cast<long>(scale));
  if (scaled.get_den() != 1)
    throw std::logic_error("lemma sweep scale does not clear the denominators");
  if (!scaled.get_num().fits_slong_p())
    throw std::logic_error("lemma sweep scale overflows");
  return scaled.get_num().get_si();
}

inline long long lcm_ll(long long a, long long b) { return std::lcm(a, b); }

// Exact sweep engine: all per-case arithmetic in int64 after clearing every
// denominator with one common scale. Equality of scaled integers is equality
// of the rationals.
struct ScaledAlphaBeta {
  const AlphaBetaSpec& spec;
  int k;
  long long scale = 1;
  // per m: integer coefficients of the features
  std::vector<long long> c_diag, c_dskew, c_cross, c_cskew_quad, c_cross_center;

  ScaledAlphaBeta(const AlphaBetaSpec& s, int k_) : spec(s), k(k_) {
    long long dens = 1;
    for (const Rational* q : {&s.b_plus, &s.b_minus, &s.skew_diag, &s.skew_cross})
      dens = lcm_ll(dens, q->get_den().get_si());
    long long l = 1;
    for (int m = 1; m <= k; ++m) l = lcm_ll(l, m);
    scale = l * dens * 6;  // 6 clears the cross-center m(m+1)/6
    c_diag.resize(static_cast<std::size_t>(k) + 1);
    c_dskew.resize(static_cast<std::size_t>(k) + 1);
    c_cross.resize(static_cast<std::size_t>(k) + 1);
    c_cskew_quad.resize(static_cast<std::size_t>(k) + 1);
    c_cross_center.resize(static_cast<std::size_t>(k) + 1);
    for (int m = 1; m <= k; ++m) {
      Rational w = make_rational((m % 2 == 1) ? 1 : -1, m) * Rational(static_cast<long>(scale));
      c_diag[static_cast<std::size_t>(m)] = to_scaled_i64(s.b_plus * w, 1);
      c_dskew[static_cast<std::size_t>(m)] = to_scaled_i64(s.skew_diag * w, 1);
      c_cross[static_cast<std::size_t>(m)] = to_scaled_i64(s.b_minus * w, 1);
      c_cskew_quad[static_cast<std::size_t>(m)] = to_scaled_i64(s.skew_cross * w, 1);
      c_cross_center[static_cast<std::size_t>(m)] =
          to_scaled_i64(s.skew_cross * CombinedQuadSpec::cross_center(m) * w, 1);
    }
    init_closed_form();
  }

  long long eval(const std::vector<std::pair<long, long>>& ab) const {
    long long total = 0;
    const bool with_skew = spec.skew_diag != 0 || spec.skew_cross != 0;
    for (int m = 1; m <= k; ++m) {
      long long f_diag = 0, f_dskew = 0, f_cross = 0, f_cskew = 0;
      long long y[kMaxCumulantOrder], w[kMaxCumulantOrder];
      for (const auto& sigma : *surj_[static_cast<std::size_t>(m)]) {
        for (int j = 0; j < m; ++j) y[j] = w[j] = 0;
        for (int i = 0; i < k; ++i) {
          y[sigma[static_cast<std::size_t>(i)]] += ab[static_cast<std::size_t>(i)].first;
          w[sigma[static_cast<std::size_t>(i)]] += ab[static_cast<std::size_t>(i)].second;
        }
        long long sy = 0, sw = 0, dg = 0, jy = 0, jw = 0, j2y = 0, j2w = 0, dskew = 0;
        for (int j = 0; j < m; ++j) {
          long long a = y[j], b = w[j];
          long long pos = j + 1;
          sy += a;
          sw += b;
          dg += a * b;
          if (with_skew) {
            jy += pos * a;
            jw += pos * b;
            j2y += pos * pos * a;
            j2w += pos * pos * b;
            dskew += (2 * pos - m - 1) * a * b;
          }
        }
        f_diag += dg;
        f_cross += sy * sw - dg;
        if (with_skew) {
          f_dskew += dskew;
          f_cskew += j2y * sw - 2 * jy * jw + sy * j2w;
        }
      }
      total += c_diag[static_cast<std::size_t>(m)] * f_diag +
               c_dskew[static_cast<std::size_t>(m)] * f_dskew +
               c_cross[static_cast<std::size_t>(m)] * f_cross +
               c_cskew_quad[static_cast<std::size_t>(m)] * f_cskew -
               c_cross_center[static_cast<std::size_t>(m)] * f_cross;
    }
    return total;
  }

  long long closed_form(const std::vector<std::pair<long, long>>& ab) const {
    if (k == 1) return cf_diag_ * (ab[0].first * ab[0].second);
    if (k == 2) return cf_pair_ * (ab[0].first * ab[1].second + ab[1].first * ab[0].second);
    return 0;
  }

  void init_closed_form() {
    cf_diag_ = to_scaled_i64(spec.b_plus, scale);
    cf_pair_ = to_scaled_i64(spec.b_plus - spec.b_minus, scale);
    for (int m = 1; m <= k; ++m) surj_[static_cast<std::size_t>(m)] = &surjections(k, m);
  }

 private:
  long long cf_diag_ = 0, cf_pair_ = 0;
  const std::vector<std::vector<std::uint8_t>>* surj_[kMaxCumulantOrder + 1] = {};
};

struct ScaledCombined {
  const CombinedQuadSpec& spec;
  int k;
  long long scale = 1;
  std::vector<long long> c_const, c_lin, c_lskew, c_quad, c_qskew, c_cross, c_cskew, c_ccenter;

  ScaledCombined(const CombinedQuadSpec& s, int k_) : spec(s), k(k_) {
    long long dens = 1;
    for (const Rational* q :
         {&s.b0, &s.b1, &s.b2, &s.b11, &s.skew_lin, &s.skew_quad, &s.skew_cross})
      dens = lcm_ll(dens, q->get_den().get_si());
    long long l = 1;
    for (int m = 1; m <= k; ++m) l = lcm_ll(l, m);
    scale = l * dens * 6;
    auto sz = static_cast<std::size_t>(k) + 1;
    c_const.resize(sz);
    c_lin.resize(sz);
    c_lskew.resize(sz);
    c_quad.resize(sz);
    c_qskew.resize(sz);
    c_cross.resize(sz);
    c_cskew.resize(sz);
    c_ccenter.resize(sz);
    for (int m = 1; m <= k; ++m) {
      Rational w = make_rational((m % 2 == 1) ? 1 : -1, m) * Rational(static_cast<long>(scale));
      c_const[static_cast<std::size_t>(m)] = to_scaled_i64(s.b0 * w, 1);
      c_lin[static_cast<std::size_t>(m)] = to_scaled_i64(s.b1 * w, 1);
      c_lskew[static_cast<std::size_t>(m)] = to_scaled_i64(s.skew_lin * w, 1);
      c_quad[static_cast<std::size_t>(m)] = to_scaled_i64(s.b2 * w, 1);
      c_qskew[static_cast<std::size_t>(m)] = to_scaled_i64(s.skew_quad * w, 1);
      c_cross[static_cast<std::size_t>(m)] = to_scaled_i64(s.b11 * w, 1);
      c_cskew[static_cast<std::size_t>(m)] = to_scaled_i64(s.skew_cross * w, 1);
      c_ccenter[static_cast<std::size_t>(m)] =
          to_scaled_i64(s.skew_cross * CombinedQuadSpec::cross_center(m) * w, 1);
    }
    init_closed_form();
  }

  long long eval(const std::vector<long>& alpha) const {
    long long total = 0;
    for (int m = 1; m <= k; ++m) {
      long long count = 0, f_lin = 0, f_lskew = 0, f_quad = 0, f_qskew = 0, f_cross = 0,
                f_cskew = 0;
      long long y[kMaxCumulantOrder];
      for (const auto& sigma : *surj_[static_cast<std::size_t>(m)]) {
        for (int j = 0; j < m; ++j) y[j] = 0;
        for (int i = 0; i < k; ++i)
          y[sigma[static_cast<std::size_t>(i)]] += alpha[static_cast<std::size_t>(i)];
        ++count;
        long long s = 0, s2 = 0, js = 0, j2s = 0;
        for (int j = 0; j < m; ++j) {
          long long v = y[j];
          long long pos = j + 1;
          s += v;
          s2 += v * v;
          js += pos * v;
          j2s += pos * pos * v;
          f_lskew += (2 * pos - m - 1) * v;
          f_qskew += (2 * pos - m - 1) * v * v;
        }
        f_lin += s;
        f_quad += s2;
        f_cross += s * s - s2;
        f_cskew += 2 * j2s * s - 2 * js * js;
      }
      total += c_const[static_cast<std::size_t>(m)] * count +
               c_lin[static_cast<std::size_t>(m)] * f_lin +
               c_lskew[static_cast<std::size_t>(m)] * f_lskew +
               c_quad[static_cast<std::size_t>(m)] * f_quad +
               c_qskew[static_cast<std::size_t>(m)] * f_qskew +
               c_cross[static_cast<std::size_t>(m)] * f_cross +
               c_cskew[static_cast<std::size_t>(m)] * f_cskew -
               c_ccenter[static_cast<std::size_t>(m)] * f_cross;
    }
    return total;
  }

  long long closed_form(const std::vector<long>& alpha) const {
    if (k == 1)
      return cf0_ + cf1_ * alpha[0] + cf2_ * (alpha[0] * alpha[0]);
    if (k == 2) return cf_pair_ * (alpha[0] * alpha[1]);
    return 0;
  }

  void init_closed_form() {
    cf0_ = to_scaled_i64(spec.b0, scale);
    cf1_ = to_scaled_i64(spec.b1, scale);
    cf2_ = to_scaled_i64(spec.b2, scale);
    cf_pair_ = to_scaled_i64(Rational(2) * (spec.b2 - spec.b11), scale);
    for (int m = 1; m <= k; ++m) surj_[static_cast<std::size_t>(m)] = &surjections(k, m);
  }

 private:
  long long cf0_ = 0, cf1_ = 0, cf2_ = 0, cf_pair_ = 0;
  const std::vector<std::vector<std::uint8_t>>* surj_[kMaxCumulantOrder + 1] = {};
};

}  // namespace detail

// Parallel exhaustive sweep for the bilinear family: multisets are chunked
// by their first element, workers verify chunks independently, and the
// verdict is the conjunction. Exact integer comparisons make the result
// independent of scheduling.
inline std::pair<long, bool> sweep_alphabeta(const AlphaBetaSpec& spec, int k,
                                             const std::vector<long>& values, int threads = 0) {
  const int nv = static_cast<int>(values.size());
  const int npairs = nv * nv;
  if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
  threads = std::max(1, std::min(threads, npairs));
  std::atomic<int> next{0};
  std::atomic<long> total_cases{0};
  std::atomic<bool> all_pass{true};
  auto worker = [&]() {
    detail::ScaledAlphaBeta engine(spec, k);
    std::vector<std::pair<long, long>> pairs(static_cast<std::size_t>(k));
    long cases = 0;
    bool pass = true;
    for (;;) {
      int first = next.fetch_add(1);
      if (first >= npairs) break;
      pairs[0] = {values[static_cast<std::size_t>(first / nv)],
                  values[static_cast<std::size_t>(first % nv)]};
      if (k == 1) {
        ++cases;
        if (engine.eval(pairs) != engine.closed_form(pairs)) pass = false;
        continue;
      }
      // remaining k-1 indices form a multiset over [first, npairs)
      std::vector<int> idx(static_cast<std::size_t>(k - 1), first);
      for (;;) {
        for (int i = 0; i + 1 < k; ++i) {
          int id = idx[static_cast<std::size_t>(i)];
          pairs[static_cast<std::size_t>(i + 1)] = {values[static_cast<std::size_t>(id / nv)],
                                                    values[static_cast<std::size_t>(id % nv)]};
        }
        ++cases;
        if (engine.eval(pairs) != engine.closed_form(pairs)) pass = false;
        if ((cases & 0x3fff) == 0 &&
            lambda_bruteforce_alphabeta(spec, pairs) !=
                lambda_closed_form_alphabeta(spec, pairs, k))
          pass = false;
        int pos = k - 2;
        while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == npairs - 1) --pos;
        if (pos < 0) break;
        int nxt = idx[static_cast<std::size_t>(pos)] + 1;
        for (int t = pos; t < k - 1; ++t) idx[static_cast<std::size_t>(t)] = nxt;
      }
    }
    total_cases.fetch_add(cases);
    if (!pass) all_pass.store(false);
  };
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  return {total_cases.load(), all_pass.load()};
}

// Exhaustive brute-force vs closed-form comparison of the five surjection
// functionals for orders 1..max_k with integer entries in [-range, range]
// (the eta-max family restricted to zero-sum inputs). The sweep clears
// denominators once and compares exact scaled integers; every 2^13-th case
// is recomputed through the rational brute-force route as a guard on the
// scaling itself.
inline std::vector<LemmaCheck> run_lemma_suite(int max_k, int range = 3) {
  if (max_k < 1 || max_k > kMaxCumulantOrder)
    throw std::invalid_argument("run_lemma_suite needs 1 <= max_k <= 8");
  std::vector<LemmaCheck> out;
  std::vector<long> values;
  for (long v = -range; v <= range; ++v) values.push_back(v);
  const int nv = static_cast<int>(values.size());

  CombinedQuadSpec combined_plain{make_rational(1, 2), make_rational(-2, 3), make_rational(3, 4),
                                  make_rational(1, 6)};
  CombinedQuadSpec combined_skew = combined_plain;
  combined_skew.skew_lin = make_rational(1, 5);
  combined_skew.skew_quad = make_rational(-1, 7);
  combined_skew.skew_cross = make_rational(2, 9);
  AlphaBetaSpec ab_plain{make_rational(5, 3), make_rational(-1, 2)};
  AlphaBetaSpec ab_skew = ab_plain;
  ab_skew.skew_diag = make_rational(-2, 5);
  ab_skew.skew_cross = make_rational(1, 3);

  for (int k = 1; k <= max_k; ++k) {
    std::vector<long> alpha(static_cast<std::size_t>(k));

    {
      LemmaCheck c{"linear", k, 0, true, ""};
      detail::for_each_multiset(nv, k, [&](const std::vector<int>& idx) {
        for (int i = 0; i < k; ++i)
          alpha[static_cast<std::size_t>(i)] = values[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])];
        ++c.cases;
        if (lambda_bruteforce_linear(alpha) != lambda_closed_form_linear(alpha, k)) c.pass = false;
      });
      out.push_back(c);
    }
    {
      LemmaCheck c{"quadratic", k, 0, true, ""};
      detail::for_each_multiset(nv, k, [&](const std::vector<int>& idx) {
        for (int i = 0; i < k; ++i)
          alpha[static_cast<std::size_t>(i)] = values[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])];
        ++c.cases;
        if (lambda_bruteforce_quadratic(alpha) != lambda_closed_form_quadratic(alpha, k))
          c.pass = false;
      });
      out.push_back(c);
    }
    for (const auto* spec : {&combined_plain, &combined_skew}) {
      LemmaCheck c{spec == &combined_plain ? "combined" : "combined-skew", k, 0, true, ""};
      detail::ScaledCombined engine(*spec, k);
      detail::for_each_multiset(nv, k, [&](const std::vector<int>& idx) {
        for (int i = 0; i < k; ++i)
          alpha[static_cast<std::size_t>(i)] = values[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])];
        ++c.cases;
        long long got = engine.eval(alpha);
        if (got != engine.closed_form(alpha)) c.pass = false;
        if ((c.cases & 0x1fff) == 0 &&
            lambda_bruteforce_combined(*spec, alpha) !=
                lambda_closed_form_combined(*spec, alpha, k))
          c.pass = false;
      });
      out.push_back(c);
    }
    {
      LemmaCheck c{"etamax", k, 0, true, ""};
      detail::for_each_multiset(nv, k, [&](const std::vector<int>& idx) {
        long sum = 0;
        for (int i = 0; i < k; ++i) {
          alpha[static_cast<std::size_t>(i)] = values[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])];
          sum += alpha[static_cast<std::size_t>(i)];
        }
        if (sum != 0) return;
        ++c.cases;
        if (lambda_bruteforce_etamax(alpha) != lambda_closed_form_etamax(alpha, k)) c.pass = false;
      });
      out.push_back(c);
    }
    for (const auto* spec : {&ab_plain, &ab_skew}) {
      bool skewed = (spec == &ab_skew);
      if (skewed && k > 4) continue;  // the plain spec carries the full-range sweep
      LemmaCheck c{skewed ? "alphabeta-skew" : "alphabeta", k, 0, true, ""};
      auto [cases, pass] = sweep_alphabeta(*spec, k, values);
      c.cases = cases;
      c.pass = pass;
      out.push_back(c);
    }
    {
      // a deliberately broken coefficient spec must be refused, not computed
      LemmaCheck c{"combined-broken", k, 1, true, ""};
      CombinedQuadSpec broken = combined_plain;
      broken.break_offset = make_rational(1, 3);
      std::vector<long> probe(static_cast<std::size_t>(k), 1);
      try {
        lambda_closed_form_combined(broken, probe, k);
        if (k >= 2) {
          c.pass = false;
          c.note = "violation went undetected";
        }
      } catch (const HypothesisViolationError&) {
        c.note = "hypothesis-violation";
      }
      out.push_back(c);
    }
  }
  return out;
}

}  // namespace circlaw
