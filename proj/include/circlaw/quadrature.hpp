#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace circlaw {

struct GaussLegendreRule {
  std::vector<double> nodes;    // on (-1,1)
  std::vector<double> weights;  // sum to 2
};

// Nodes by Newton iteration on P_n from the Chebyshev initial guess.
inline const GaussLegendreRule& gauss_legendre(int n) {
  static std::map<int, GaussLegendreRule> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  GaussLegendreRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double pd = 0.0;
    for (int it2 = 0; it2 < 100; ++it2) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pd = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / pd;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.nodes[i] = x;
    rule.weights[i] = 2.0 / ((1.0 - x * x) * pd * pd);
  }
  return cache.emplace(n, std::move(rule)).first->second;
}

template <class F>
double integrate_gl(const F& f, double a, double b, int n) {
  const auto& rule = gauss_legendre(n);
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += rule.weights[i] * f(mid + half * rule.nodes[i]);
  return half * s;
}

// Doubles the order until two refinements agree to rel_tol.
template <class F>
double integrate_auto(const F& f, double a, double b, double rel_tol = 1e-10,
                      int n0 = 32, int n_max = 4096) {
  double prev = integrate_gl(f, a, b, n0);
  for (int n = 2 * n0; n <= n_max; n *= 2) {
    double cur = integrate_gl(f, a, b, n);
    if (std::abs(cur - prev) <= rel_tol * std::max(1.0, std::abs(cur))) return cur;
    prev = cur;
  }
  throw std::runtime_error("integrate_auto: no convergence at requested tolerance");
}

// Adaptive 1-D integration with interval bisection (Gauss-Legendre 15/30
// error estimate per panel). Robust around mild kinks.
template <class F>
double integrate_adaptive(const F& f, double a, double b, double abs_tol = 1e-9,
                          int depth = 0) {
  double coarse = integrate_gl(f, a, b, 15);
  double fine = integrate_gl(f, a, b, 30);
  if (std::abs(fine - coarse) <= abs_tol || depth >= 30) return fine;
  double m = 0.5 * (a + b);
  return integrate_adaptive(f, a, m, 0.5 * abs_tol, depth + 1) +
         integrate_adaptive(f, m, b, 0.5 * abs_tol, depth + 1);
}

// Integral of g over the unit disk, tensor Gauss-Legendre in (r, theta);
// both orders double until successive refinements agree to rel_tol.
template <class G>
double integrate_disk(const G& g, double rel_tol = 1e-10, double radius = 1.0) {
  auto value = [&](int nr, int nt) {
    const auto& rr = gauss_legendre(nr);
    const auto& tr = gauss_legendre(nt);
    double s = 0.0;
    for (int i = 0; i < nr; ++i) {
      double r = 0.5 * radius * (rr.nodes[i] + 1.0);
      double wr = 0.5 * radius * rr.weights[i];
      double st = 0.0;
      for (int j = 0; j < nt; ++j) {
        double t = std::numbers::pi * (tr.nodes[j] + 1.0);
        st += std::numbers::pi * tr.weights[j] * g(r, t);
      }
      s += wr * r * st;
    }
    return s;
  };
  double prev = value(24, 24);
  for (int n = 48; n <= 1536; n *= 2) {
    double cur = value(n, n);
    if (std::abs(cur - prev) <= rel_tol * std::max(1.0, std::abs(cur))) return cur;
    prev = cur;
  }
  throw std::runtime_error("integrate_disk: no convergence at requested tolerance");
}

}  // namespace circlaw
