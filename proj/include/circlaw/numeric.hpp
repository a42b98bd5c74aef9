#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

namespace circlaw {

// digamma by argument shift + asymptotic series
inline double digamma(double x) {
  double acc = 0.0;
  while (x < 8.0) {
    acc -= 1.0 / x;
    x += 1.0;
  }
  double inv = 1.0 / x, inv2 = inv * inv;
  return acc + std::log(x) - 0.5 * inv -
         inv2 * (1.0 / 12 - inv2 * (1.0 / 120 - inv2 * (1.0 / 252 - inv2 / 240)));
}

// P(Poisson(lambda) <= k), stable for large lambda via log-space summation
// off the running maximum term.
inline double poisson_cdf(long k, double lambda) {
  if (k < 0) return 0.0;
  if (lambda <= 0.0) return 1.0;
  if (lambda < 500.0) {
    double term = std::exp(-lambda), sum = term;
    for (long i = 1; i <= k; ++i) {
      term *= lambda / static_cast<double>(i);
      sum += term;
    }
    return std::min(sum, 1.0);
  }
  double log_lambda = std::log(lambda);
  double max_log = -lambda;
  std::vector<double> logs(static_cast<std::size_t>(k) + 1);
  double lg = 0.0;  // log i!
  for (long i = 0; i <= k; ++i) {
    if (i > 0) lg += std::log(static_cast<double>(i));
    double l = i * log_lambda - lambda - lg;
    logs[static_cast<std::size_t>(i)] = l;
    max_log = std::max(max_log, l);
  }
  double s = 0.0;
  for (double l : logs) s += std::exp(l - max_log);
  return std::min(std::exp(max_log) * s, 1.0);
}

// Expected number of Ginibre(n) eigenvalue moduli exceeding r:
//   sum_{k<n} P(Gamma(k+1, n) > r^2) = sum_{k<n} P(Poisson(n r^2) <= k)
//                                    = sum_{i<n} (n-i) pmf_i(n r^2).
// One O(n) pass with log-space scaling.
inline double ginibre_expected_exceed(int n, double r) {
  double lambda = static_cast<double>(n) * r * r;
  if (lambda <= 0.0) return static_cast<double>(n);
  double lg = 0.0;
  double max_log = -lambda;
  std::vector<double> logs(static_cast<std::size_t>(n));
  double log_lambda = std::log(lambda);
  for (int i = 0; i < n; ++i) {
    if (i > 0) lg += std::log(static_cast<double>(i));
    double l = i * log_lambda - lambda - lg;
    logs[static_cast<std::size_t>(i)] = l;
    max_log = std::max(max_log, l);
  }
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += (n - i) * std::exp(logs[static_cast<std::size_t>(i)] - max_log);
  double v = std::exp(max_log) * s;
  return std::clamp(v, 0.0, static_cast<double>(n));
}

// Asymptotic two-sided Kolmogorov-Smirnov tail
//   Q(lambda) = 2 sum_{j>=1} (-1)^{j-1} e^{-2 j^2 lambda^2}.
inline double kolmogorov_q(double lambda) {
  if (lambda < 1e-8) return 1.0;
  double sum = 0.0;
  double sign = 1.0;
  for (int j = 1; j <= 100; ++j) {
    double t = std::exp(-2.0 * j * j * lambda * lambda);
    sum += sign * t;
    if (t < 1e-16) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

}  // namespace circlaw
