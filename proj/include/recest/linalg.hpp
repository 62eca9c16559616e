#ifndef RECEST_LINALG_HPP
#define RECEST_LINALG_HPP

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace recest {

using Vec = std::vector<double>;

/// Dense m-by-m real matrix, row major. Dimensions here are tiny
/// (parameter dimension, m <= 10 or so), so everything is stored flat.
class SquareMatrix {
 public:
  SquareMatrix() = default;
  explicit SquareMatrix(std::size_t n, double fill = 0.0) : n_(n), e_(n * n, fill) {}

  static SquareMatrix identity(std::size_t n) {
    SquareMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }
  static SquareMatrix diagonal(const Vec& d) {
    SquareMatrix m(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }

  std::size_t dim() const { return n_; }
  double& operator()(std::size_t i, std::size_t j) { return e_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return e_[i * n_ + j]; }

  SquareMatrix& operator+=(const SquareMatrix& o) {
    for (std::size_t k = 0; k < e_.size(); ++k) e_[k] += o.e_[k];
    return *this;
  }
  SquareMatrix& operator-=(const SquareMatrix& o) {
    for (std::size_t k = 0; k < e_.size(); ++k) e_[k] -= o.e_[k];
    return *this;
  }
  SquareMatrix& operator*=(double s) {
    for (double& v : e_) v *= s;
    return *this;
  }
  friend SquareMatrix operator+(SquareMatrix a, const SquareMatrix& b) { return a += b; }
  friend SquareMatrix operator-(SquareMatrix a, const SquareMatrix& b) { return a -= b; }
  friend SquareMatrix operator*(SquareMatrix a, double s) { return a *= s; }
  friend SquareMatrix operator*(double s, SquareMatrix a) { return a *= s; }

  bool finite() const {
    for (double v : e_)
      if (!std::isfinite(v)) return false;
    return true;
  }
  double max_abs() const {
    double m = 0.0;
    for (double v : e_) m = std::max(m, std::abs(v));
    return m;
  }

 private:
  std::size_t n_ = 0;
  std::vector<double> e_;
};

inline Vec operator+(const Vec& a, const Vec& b) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}
inline Vec operator-(const Vec& a, const Vec& b) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}
inline Vec operator*(double s, const Vec& a) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = s * a[i];
  return r;
}
inline Vec& operator+=(Vec& a, const Vec& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  return a;
}

inline Vec matvec(const SquareMatrix& A, const Vec& x) {
  Vec r(A.dim(), 0.0);
  for (std::size_t i = 0; i < A.dim(); ++i)
    for (std::size_t j = 0; j < A.dim(); ++j) r[i] += A(i, j) * x[j];
  return r;
}

inline SquareMatrix matmul(const SquareMatrix& A, const SquareMatrix& B) {
  SquareMatrix r(A.dim());
  for (std::size_t i = 0; i < A.dim(); ++i)
    for (std::size_t k = 0; k < A.dim(); ++k) {
      const double aik = A(i, k);
      for (std::size_t j = 0; j < A.dim(); ++j) r(i, j) += aik * B(k, j);
    }
  return r;
}

inline SquareMatrix outer(const Vec& a, const Vec& b) {
  SquareMatrix r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r(i, j) = a[i] * b[j];
  return r;
}

inline double norm2(const Vec& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}
inline double max_abs(const Vec& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}
inline bool finite(const Vec& v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

/// Thrown when a pivot falls below the relative singularity threshold
/// (i.e. det of the normalizer is numerically zero).
class SingularMatrixError : public std::runtime_error {
 public:
  explicit SingularMatrixError(std::string what, int step = -1)
      : std::runtime_error(std::move(what)), step_(step) {}
  int step() const { return step_; }

 private:
  int step_;
};

constexpr double kSingularPivotRel = 1e-12;

/// Solves A x = b by Gaussian elimination with partial pivoting.
/// Pivots smaller than 1e-12 * max|A_ij| are treated as singular.
Vec solve_linear(const SquareMatrix& A, const Vec& b);

}  // namespace recest

#endif  // RECEST_LINALG_HPP
