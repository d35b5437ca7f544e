#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <utility>
#include <vector>

namespace spanperc {

using BigInt = mpz_class;
using Rational = mpq_class;

// Dense square integer matrix, flat row-major storage.
class IntMatrix {
 public:
  IntMatrix() = default;
  explicit IntMatrix(int n) : n_(n), a_(static_cast<std::size_t>(n) * n) {}

  int size() const { return n_; }
  BigInt& at(int i, int j) { return a_[static_cast<std::size_t>(i) * n_ + j]; }
  const BigInt& at(int i, int j) const {
    return a_[static_cast<std::size_t>(i) * n_ + j];
  }

  IntMatrix minor_without(const std::vector<int>& drop) const {
    std::vector<bool> gone(n_, false);
    for (int d : drop) gone[d] = true;
    std::vector<int> keep;
    for (int i = 0; i < n_; ++i)
      if (!gone[i]) keep.push_back(i);
    IntMatrix m(static_cast<int>(keep.size()));
    for (std::size_t i = 0; i < keep.size(); ++i)
      for (std::size_t j = 0; j < keep.size(); ++j)
        m.at(static_cast<int>(i), static_cast<int>(j)) =
            at(keep[i], keep[j]);
    return m;
  }

 private:
  int n_ = 0;
  std::vector<BigInt> a_;
};

// Fraction-free (Bareiss) determinant. Exact for integer input; intermediate
// entries are minors, so they stay integral and modest in size.
inline BigInt bareiss_det(IntMatrix m) {
  const int n = m.size();
  if (n == 0) return 1;
  BigInt prev = 1;
  BigInt t1, t2;
  int sign = 1;
  for (int k = 0; k + 1 < n; ++k) {
    if (m.at(k, k) == 0) {
      int r = -1;
      for (int i = k + 1; i < n; ++i)
        if (m.at(i, k) != 0) {
          r = i;
          break;
        }
      if (r < 0) return 0;
      for (int j = 0; j < n; ++j) std::swap(m.at(k, j), m.at(r, j));
      sign = -sign;
    }
    const BigInt& pivot = m.at(k, k);
    for (int i = k + 1; i < n; ++i) {
      for (int j = k + 1; j < n; ++j) {
        mpz_mul(t1.get_mpz_t(), m.at(i, j).get_mpz_t(), pivot.get_mpz_t());
        mpz_mul(t2.get_mpz_t(), m.at(i, k).get_mpz_t(),
                m.at(k, j).get_mpz_t());
        mpz_sub(t1.get_mpz_t(), t1.get_mpz_t(), t2.get_mpz_t());
        mpz_divexact(m.at(i, j).get_mpz_t(), t1.get_mpz_t(),
                     prev.get_mpz_t());
      }
      m.at(i, k) = 0;
    }
    prev = pivot;
  }
  BigInt det = m.at(n - 1, n - 1);
  if (sign < 0) mpz_neg(det.get_mpz_t(), det.get_mpz_t());
  return det;
}

// Exact inverse times determinant: returns (N, det) with N = det * A^{-1},
// N integral (the adjugate). Throws when A is singular.
inline std::pair<IntMatrix, BigInt> scaled_inverse(const IntMatrix& a) {
  const int n = a.size();
  BigInt det = bareiss_det(a);
  if (det == 0) throw std::invalid_argument("scaled_inverse: singular matrix");
  // Gauss-Jordan over rationals, then clear denominators with det.
  std::vector<std::vector<Rational>> m(n, std::vector<Rational>(2 * n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m[i][j] = Rational(a.at(i, j));
    m[i][n + i] = 1;
  }
  for (int k = 0; k < n; ++k) {
    int r = k;
    while (r < n && m[r][k] == 0) ++r;
    if (r == n) throw std::invalid_argument("scaled_inverse: singular matrix");
    if (r != k) std::swap(m[r], m[k]);
    Rational inv = 1 / m[k][k];
    for (int j = k; j < 2 * n; ++j) m[k][j] *= inv;
    for (int i = 0; i < n; ++i) {
      if (i == k || m[i][k] == 0) continue;
      Rational f = m[i][k];
      for (int j = k; j < 2 * n; ++j) m[i][j] -= f * m[k][j];
    }
  }
  IntMatrix out(n);
  Rational scaled;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      scaled = m[i][n + j] * Rational(det);
      scaled.canonicalize();
      if (scaled.get_den() != 1)
        throw std::logic_error("scaled_inverse: adjugate not integral");
      out.at(i, j) = scaled.get_num();
    }
  return {std::move(out), std::move(det)};
}

}  // namespace spanperc
