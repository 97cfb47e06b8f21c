#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "taunav/error.hpp"

namespace taunav {

/// Symmetric positive-definite matrix with two sub-diagonals, stored by
/// diagonal: diag[i] = A(i,i), off1[i] = A(i,i+1), off2[i] = A(i,i+2).
struct SymmetricPentadiagonal {
  std::vector<double> diag;
  std::vector<double> off1;
  std::vector<double> off2;

  explicit SymmetricPentadiagonal(std::size_t n = 0)
      : diag(n, 0.0), off1(n > 0 ? n - 1 : 0, 0.0), off2(n > 1 ? n - 2 : 0, 0.0) {}

  std::size_t size() const { return diag.size(); }
};

/// Solves A·x = b in place of b via the LDLᵀ factorization. Throws
/// NumericError if A is not positive definite.
inline std::vector<double> solve(const SymmetricPentadiagonal& a, std::vector<double> b) {
  const std::size_t n = a.size();
  if (b.size() != n) throw DomainError("right-hand side size mismatch");
  if (n == 0) return b;
  // A = L D Lᵀ, L unit lower triangular with bandwidth 2.
  std::vector<double> d(n), l1(n, 0.0), l2(n, 0.0);  // l1[i] = L(i+1,i), l2[i] = L(i+2,i)
  for (std::size_t i = 0; i < n; ++i) {
    double di = a.diag[i];
    if (i >= 1) di -= l1[i - 1] * l1[i - 1] * d[i - 1];
    if (i >= 2) di -= l2[i - 2] * l2[i - 2] * d[i - 2];
    if (!(di > 0.0) || !std::isfinite(di)) throw NumericError("banded matrix is not positive definite");
    d[i] = di;
    if (i + 1 < n) {
      double e = a.off1[i];
      if (i >= 1) e -= l2[i - 1] * l1[i - 1] * d[i - 1];
      l1[i] = e / di;
    }
    if (i + 2 < n) l2[i] = a.off2[i] / di;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (i >= 1) b[i] -= l1[i - 1] * b[i - 1];
    if (i >= 2) b[i] -= l2[i - 2] * b[i - 2];
  }
  for (std::size_t i = 0; i < n; ++i) b[i] /= d[i];
  for (std::size_t i = n; i-- > 0;) {
    if (i + 1 < n) b[i] -= l1[i] * b[i + 1];
    if (i + 2 < n) b[i] -= l2[i] * b[i + 2];
  }
  return b;
}

}  // namespace taunav
