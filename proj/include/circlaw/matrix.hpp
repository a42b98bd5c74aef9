#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

namespace circlaw {

using Complex = std::complex<double>;

// Dense square complex matrix, row-major.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  explicit ComplexMatrix(int n) : n_(n), a_(static_cast<std::size_t>(n) * n) {
    if (n < 1) throw std::invalid_argument("matrix dimension must be >= 1");
  }

  int dim() const { return n_; }

  Complex& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * n_ + j]; }
  const Complex& operator()(int i, int j) const {
    return a_[static_cast<std::size_t>(i) * n_ + j];
  }

  bool all_finite() const {
    for (const auto& z : a_)
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
  }

  double max_abs() const {
    double m = 0.0;
    for (const auto& z : a_) m = std::max(m, std::abs(z));
    return m;
  }

  Complex trace() const {
    Complex t = 0.0;
    for (int i = 0; i < n_; ++i) t += (*this)(i, i);
    return t;
  }

  Complex trace_of_square() const {
    Complex t = 0.0;
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) t += (*this)(i, j) * (*this)(j, i);
    return t;
  }

  double frobenius_norm() const {
    double s = 0.0;
    for (const auto& z : a_) s += std::norm(z);
    return std::sqrt(s);
  }

 private:
  int n_ = 0;
  std::vector<Complex> a_;
};

// Determinant by LU with partial pivoting. O(n^3); used as the independent
// oracle against products of eigenvalues.
inline Complex lu_det(ComplexMatrix a) {
  const int n = a.dim();
  Complex det = 1.0;
  for (int k = 0; k < n; ++k) {
    int piv = k;
    double best = std::abs(a(k, k));
    for (int i = k + 1; i < n; ++i) {
      double v = std::abs(a(i, k));
      if (v > best) {
        best = v;
        piv = i;
      }
    }
    if (best == 0.0) return 0.0;
    if (piv != k) {
      for (int j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
      det = -det;
    }
    det *= a(k, k);
    for (int i = k + 1; i < n; ++i) {
      Complex f = a(i, k) / a(k, k);
      for (int j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
    }
  }
  return det;
}

// Modified Gram-Schmidt with one reorthogonalization pass. Returns Q whose
// triangular factor has a real positive diagonal; the phase of each diagonal
// entry is divided out of the corresponding column, which is what makes the
// result Haar distributed when the input has iid complex gaussian entries.
inline ComplexMatrix orthonormalize_columns(const ComplexMatrix& a) {
  const int n = a.dim();
  ComplexMatrix q = a;
  for (int j = 0; j < n; ++j) {
    for (int pass = 0; pass < 2; ++pass) {
      for (int k = 0; k < j; ++k) {
        Complex dot = 0.0;
        for (int i = 0; i < n; ++i) dot += std::conj(q(i, k)) * q(i, j);
        for (int i = 0; i < n; ++i) q(i, j) -= dot * q(i, k);
      }
    }
    double nrm = 0.0;
    for (int i = 0; i < n; ++i) nrm += std::norm(q(i, j));
    nrm = std::sqrt(nrm);
    if (!(nrm > 0.0) || !std::isfinite(nrm))
      throw std::runtime_error("orthonormalization breakdown: dependent columns");
    // r_jj = <q_j before normalization, original a_j> phase; with MGS the
    // computed r_jj is the norm itself, so only the normalization remains.
    for (int i = 0; i < n; ++i) q(i, j) /= nrm;
  }
  return q;
}

}  // namespace circlaw
