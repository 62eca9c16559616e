#include "recest/linalg.hpp"

#include <algorithm>

namespace recest {

Vec solve_linear(const SquareMatrix& A, const Vec& b) {
  const std::size_t n = A.dim();
  if (b.size() != n) throw std::invalid_argument("solve_linear: dimension mismatch");

  SquareMatrix U = A;
  Vec y = b;
  const double scale = U.max_abs();
  const double threshold = kSingularPivotRel * scale;

  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(U(r, col)) > std::abs(U(piv, col))) piv = r;
    const double p = U(piv, col);
    if (std::abs(p) < threshold || p == 0.0)
      throw SingularMatrixError("solve_linear: pivot below singularity threshold");
    if (piv != col) {
      for (std::size_t j = col; j < n; ++j) std::swap(U(piv, j), U(col, j));
      std::swap(y[piv], y[col]);
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = U(r, col) / U(col, col);
      if (f == 0.0) continue;
      U(r, col) = 0.0;
      for (std::size_t j = col + 1; j < n; ++j) U(r, j) -= f * U(col, j);
      y[r] -= f * y[col];
    }
  }

  Vec x(n);
  for (std::size_t ii = n; ii-- > 0;) {
    double s = y[ii];
    for (std::size_t j = ii + 1; j < n; ++j) s -= U(ii, j) * x[j];
    x[ii] = s / U(ii, ii);
  }
  return x;
}

}  // namespace recest
