#pragma once

#include <cstddef>
#include <vector>

namespace anisoforge {

template <class T>
using Matrix = std::vector<std::vector<T>>;

// Division-free determinant (Berkowitz). Works over any commutative ring, which is
// what lets the same routine compute numeric norms over Z/p^N and symbolic norm
// forms over (Z/p^N)[X_1..X_k].
//
// Ops must provide zero(), one(), add(a, b), sub(a, b), mul(a, b).
template <class T, class Ops>
T berkowitz_determinant(const Matrix<T>& a, const Ops& ops) {
  const std::size_t n = a.size();
  if (n == 0) return ops.one();

  // Characteristic polynomial coefficients of the leading r x r block, highest first.
  std::vector<T> poly{ops.one()};
  for (std::size_t r = 0; r < n; ++r) {
    // First column of the Toeplitz factor: 1, -a_rr, -R C, -R M C, ..., -R M^(r-1) C
    std::vector<T> col;
    col.reserve(r + 2);
    col.push_back(ops.one());
    col.push_back(ops.sub(ops.zero(), a[r][r]));
    std::vector<T> v;
    v.reserve(r);
    for (std::size_t i = 0; i < r; ++i) v.push_back(a[i][r]);
    for (std::size_t j = 0; j < r; ++j) {
      T dot = ops.zero();
      for (std::size_t i = 0; i < r; ++i) dot = ops.add(dot, ops.mul(a[r][i], v[i]));
      col.push_back(ops.sub(ops.zero(), dot));
      if (j + 1 < r) {
        std::vector<T> next(r, ops.zero());
        for (std::size_t i = 0; i < r; ++i) {
          for (std::size_t k = 0; k < r; ++k) next[i] = ops.add(next[i], ops.mul(a[i][k], v[k]));
        }
        v = std::move(next);
      }
    }
    std::vector<T> next(r + 2, ops.zero());
    for (std::size_t i = 0; i < r + 2; ++i) {
      for (std::size_t j = 0; j <= i && j < poly.size(); ++j) {
        next[i] = ops.add(next[i], ops.mul(col[i - j], poly[j]));
      }
    }
    poly = std::move(next);
  }
  // poly is det(tI - A); the constant term is (-1)^n det(A).
  return n % 2 == 0 ? poly[n] : ops.sub(ops.zero(), poly[n]);
}

}  // namespace anisoforge
