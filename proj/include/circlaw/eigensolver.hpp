#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "circlaw/matrix.hpp"

namespace circlaw {

struct EigResult {
  std::vector<Complex> eigenvalues;
  int iterations = 0;
  bool converged = false;
};

class NonConvergenceError : public std::runtime_error {
 public:
  NonConvergenceError(std::string msg, EigResult partial_result)
      : std::runtime_error(std::move(msg)), partial(std::move(partial_result)) {}
  EigResult partial;
};

// Unitary reduction to upper Hessenberg form by Householder reflections.
// Similarity, so trace and Frobenius norm are preserved to rounding.
inline ComplexMatrix hessenberg_reduce(const ComplexMatrix& a_in) {
  if (!a_in.all_finite()) throw std::invalid_argument("hessenberg_reduce: non-finite entry");
  ComplexMatrix a = a_in;
  const int n = a.dim();
  std::vector<Complex> v(n), w(n);
  for (int k = 0; k + 2 < n; ++k) {
    double xnorm = 0.0;
    for (int i = k + 1; i < n; ++i) xnorm += std::norm(a(i, k));
    xnorm = std::sqrt(xnorm);
    if (xnorm == 0.0) continue;
    Complex x0 = a(k + 1, k);
    Complex phase = (x0 == 0.0) ? Complex(1.0) : x0 / std::abs(x0);
    Complex beta = -phase * xnorm;
    // v = x - beta*e1, normalized; the sign choice avoids cancellation
    double vnorm = 0.0;
    for (int i = k + 1; i < n; ++i) {
      v[i] = a(i, k);
      if (i == k + 1) v[i] -= beta;
      vnorm += std::norm(v[i]);
    }
    vnorm = std::sqrt(vnorm);
    if (vnorm == 0.0) continue;
    for (int i = k + 1; i < n; ++i) v[i] /= vnorm;

    // A <- P A with P = I - 2 v v^H  (rows k+1..n-1)
    for (int j = k; j < n; ++j) {
      Complex dot = 0.0;
      for (int i = k + 1; i < n; ++i) dot += std::conj(v[i]) * a(i, j);
      dot *= 2.0;
      for (int i = k + 1; i < n; ++i) a(i, j) -= dot * v[i];
    }
    // A <- A P (columns k+1..n-1)
    for (int i = 0; i < n; ++i) {
      Complex dot = 0.0;
      for (int j = k + 1; j < n; ++j) dot += a(i, j) * v[j];
      dot *= 2.0;
      for (int j = k + 1; j < n; ++j) a(i, j) -= dot * std::conj(v[j]);
    }
    a(k + 1, k) = beta;
    for (int i = k + 2; i < n; ++i) a(i, k) = 0.0;
  }
  return a;
}

namespace detail {

// Eigenvalues of [[a,b],[c,d]]; the root closer to d is returned first.
inline std::pair<Complex, Complex> eig2x2(Complex a, Complex b, Complex c, Complex d) {
  Complex m = 0.5 * (a + d);
  Complex disc = std::sqrt(0.25 * (a - d) * (a - d) + b * c);
  Complex l1 = m + disc, l2 = m - disc;
  if (std::abs(l1 - d) > std::abs(l2 - d)) std::swap(l1, l2);
  return {l1, l2};
}

struct Givens {
  double c;   // real cosine
  Complex s;  // complex sine
};

inline Givens make_givens(Complex a, Complex b) {
  double aa = std::abs(a), bb = std::abs(b);
  if (bb == 0.0) return {1.0, 0.0};
  if (aa == 0.0) return {0.0, Complex(1.0)};
  double t = std::hypot(aa, bb);
  Complex u = a / aa;
  return {aa / t, u * std::conj(b) / t};
}

}  // namespace detail

// All eigenvalues of an upper Hessenberg matrix by the shifted QR iteration.
// Single complex Wilkinson shift, deflation of h(k+1,k) against the
// neighbouring diagonal entries, explicit QR sweep by Givens rotations.
// max_sweeps < 0 selects the default budget of 30*n.
inline EigResult qr_eigenvalues(ComplexMatrix h, double tol = 1e-12, int max_sweeps = -1) {
  if (tol <= 0.0) throw std::invalid_argument("qr_eigenvalues: tol must be positive");
  const int n = h.dim();
  if (max_sweeps < 0) max_sweeps = 30 * n;
  EigResult res;
  res.eigenvalues.assign(n, Complex(0.0));
  std::vector<bool> done(n, false);

  auto deflate_small = [&](int lo, int hi) {
    for (int k = lo; k < hi; ++k) {
      if (std::abs(h(k + 1, k)) <= tol * (std::abs(h(k, k)) + std::abs(h(k + 1, k + 1))))
        h(k + 1, k) = 0.0;
    }
  };

  int hi = n - 1;
  int sweeps = 0;
  int stall = 0;
  std::vector<detail::Givens> rot(n);
  while (hi >= 0) {
    deflate_small(0, hi);
    if (hi == 0 || h(hi, hi - 1) == 0.0) {
      res.eigenvalues[hi] = h(hi, hi);
      done[hi] = true;
      --hi;
      stall = 0;
      continue;
    }
    int lo = hi;
    while (lo > 0 && h(lo, lo - 1) != 0.0) --lo;
    if (hi - lo == 1) {
      auto [l1, l2] = detail::eig2x2(h(lo, lo), h(lo, hi), h(hi, lo), h(hi, hi));
      res.eigenvalues[hi] = l1;
      res.eigenvalues[lo] = l2;
      done[hi] = done[lo] = true;
      h(hi, lo) = 0.0;
      hi = lo - 1;
      stall = 0;
      continue;
    }
    if (sweeps >= max_sweeps) {
      for (int i = 0; i <= hi; ++i) res.eigenvalues[i] = h(i, i);
      res.iterations = sweeps;
      res.converged = false;
      throw NonConvergenceError(
          "qr_eigenvalues: no convergence after " + std::to_string(sweeps) +
              " sweeps (active block size " + std::to_string(hi - lo + 1) + ")",
          res);
    }

    Complex shift;
    if (stall > 0 && stall % 12 == 0) {
      // exceptional shift to break symmetric stalls; deterministic
      shift = h(hi, hi) + 0.75 * (std::abs(h(hi, hi - 1)) + std::abs(h(hi - 1, hi - 2 >= lo ? hi - 2 : lo)));
    } else {
      auto [w1, w2] =
          detail::eig2x2(h(hi - 1, hi - 1), h(hi - 1, hi), h(hi, hi - 1), h(hi, hi));
      shift = w1;  // Wilkinson: root nearest trailing diagonal entry
    }

    // explicit shifted QR on the active block: H - sI = QR, H <- RQ + sI
    for (int i = lo; i <= hi; ++i) h(i, i) -= shift;
    for (int k = lo; k < hi; ++k) {
      auto g = detail::make_givens(h(k, k), h(k + 1, k));
      rot[k] = g;
      for (int j = k; j <= hi; ++j) {
        Complex t1 = h(k, j), t2 = h(k + 1, j);
        h(k, j) = g.c * t1 + g.s * t2;
        h(k + 1, j) = -std::conj(g.s) * t1 + g.c * t2;
      }
    }
    for (int k = lo; k < hi; ++k) {
      const auto& g = rot[k];
      int top = lo;
      for (int i = top; i <= std::min(k + 2, hi); ++i) {
        Complex t1 = h(i, k), t2 = h(i, k + 1);
        h(i, k) = g.c * t1 + std::conj(g.s) * t2;
        h(i, k + 1) = -g.s * t1 + g.c * t2;
      }
    }
    for (int i = lo; i <= hi; ++i) h(i, i) += shift;
    ++sweeps;
    ++stall;
  }
  res.iterations = sweeps;
  res.converged = true;
  return res;
}

// Full pipeline for a dense matrix.
inline EigResult eigenvalues(const ComplexMatrix& a, double tol = 1e-12, int max_sweeps = -1) {
  return qr_eigenvalues(hessenberg_reduce(a), tol, max_sweeps);
}

}  // namespace circlaw
