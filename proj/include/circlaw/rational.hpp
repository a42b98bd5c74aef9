#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <vector>

namespace circlaw {

using BigInt = mpz_class;
using Rational = mpq_class;

inline Rational make_rational(long num, long den = 1) {
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

inline std::string to_string(const Rational& q) { return q.get_str(); }

inline BigInt big_pow(const BigInt& base, unsigned long e) {
  BigInt out;
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), e);
  return out;
}

inline BigInt binomial(unsigned long n, unsigned long k) {
  BigInt out;
  mpz_bin_uiui(out.get_mpz_t(), n, k);
  return out;
}

// S_p(N) = sum_{l=0..N} l^p for p = 0..p_max, exact, via
// (N+1)^{p+1} = sum_{j<=p} C(p+1, j) S_j(N).
inline std::vector<Rational> power_sums_upto(int p_max, long n_top) {
  std::vector<Rational> s(static_cast<std::size_t>(p_max) + 1, Rational(0));
  if (n_top < 0) return s;  // empty sum
  BigInt np1(n_top + 1);
  for (int p = 0; p <= p_max; ++p) {
    Rational acc(big_pow(np1, static_cast<unsigned long>(p) + 1));
    for (int j = 0; j < p; ++j)
      acc -= Rational(binomial(static_cast<unsigned long>(p) + 1,
                               static_cast<unsigned long>(j))) *
             s[static_cast<std::size_t>(j)];
    acc /= Rational(p + 1);
    s[static_cast<std::size_t>(p)] = acc;
  }
  return s;
}

}  // namespace circlaw
