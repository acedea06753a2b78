#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "cmsym/errors.hpp"
#include "cmsym/scalar.hpp"

namespace cmsym {

/// Dense N x N matrix over any scalar of this library (row-major).
template <class T>
class SquareMatrix {
 public:
  SquareMatrix() = default;
  explicit SquareMatrix(int dim) : dim_(dim), a_(static_cast<std::size_t>(dim) * dim, zero<T>()) {}

  static SquareMatrix identity(int dim) {
    SquareMatrix m(dim);
    for (int i = 0; i < dim; ++i) m(i, i) = from_int<T>(1);
    return m;
  }
  static SquareMatrix diagonal(const std::vector<T>& d) {
    SquareMatrix m(static_cast<int>(d.size()));
    for (int i = 0; i < m.dim(); ++i) m(i, i) = d[i];
    return m;
  }

  int dim() const { return dim_; }
  T& operator()(int r, int c) { return a_[static_cast<std::size_t>(r) * dim_ + c]; }
  const T& operator()(int r, int c) const { return a_[static_cast<std::size_t>(r) * dim_ + c]; }

  SquareMatrix& operator+=(const SquareMatrix& o) {
    check_dim(o);
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
    return *this;
  }
  SquareMatrix& operator-=(const SquareMatrix& o) {
    check_dim(o);
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
    return *this;
  }
  friend SquareMatrix operator+(SquareMatrix a, const SquareMatrix& b) { return a += b; }
  friend SquareMatrix operator-(SquareMatrix a, const SquareMatrix& b) { return a -= b; }

  friend SquareMatrix operator*(const SquareMatrix& a, const SquareMatrix& b) {
    a.check_dim(b);
    const int n = a.dim_;
    SquareMatrix out(n);
    for (int i = 0; i < n; ++i) {
      for (int k = 0; k < n; ++k) {
        const T& aik = a(i, k);
        if (is_zero(aik) && is_exact_v<T>) continue;
        for (int j = 0; j < n; ++j) out(i, j) += aik * b(k, j);
      }
    }
    return out;
  }

  friend SquareMatrix operator*(SquareMatrix a, const T& s) {
    for (auto& x : a.a_) x = x * s;
    return a;
  }

  friend bool operator==(const SquareMatrix& a, const SquareMatrix& b) {
    return a.dim_ == b.dim_ && a.a_ == b.a_;
  }

  T trace() const {
    T t = zero<T>();
    for (int i = 0; i < dim_; ++i) t += (*this)(i, i);
    return t;
  }

  SquareMatrix transpose() const {
    SquareMatrix t(dim_);
    for (int i = 0; i < dim_; ++i)
      for (int j = 0; j < dim_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  /// Largest entry magnitude (of the primal values).
  double max_abs() const {
    double m = 0.0;
    for (const auto& x : a_) m = std::max(m, scalar_traits<T>::magnitude(x));
    return m;
  }

  const std::vector<T>& data() const { return a_; }

 private:
  void check_dim(const SquareMatrix& o) const {
    if (o.dim_ != dim_) throw ArityError("matrix dimension mismatch");
  }

  int dim_ = 0;
  std::vector<T> a_;
};

namespace detail {

// Pivot choice: first nonzero entry in exact arithmetic, largest magnitude otherwise.
template <class T>
int choose_pivot(const SquareMatrix<T>& m, int col) {
  int best = -1;
  double best_mag = 0.0;
  for (int r = col; r < m.dim(); ++r) {
    if (primal_is_zero(m(r, col))) continue;
    if constexpr (is_exact_v<T>) {
      return r;
    } else {
      double mag = scalar_traits<T>::magnitude(m(r, col));
      if (mag > best_mag) {
        best_mag = mag;
        best = r;
      }
    }
  }
  return best;
}

template <class T>
void swap_rows(SquareMatrix<T>& m, int a, int b) {
  if (a == b) return;
  for (int c = 0; c < m.dim(); ++c) std::swap(m(a, c), m(b, c));
}

}  // namespace detail

/// Largest condition estimate accepted by inverse() in floating point.
inline constexpr double kMaxConditionEstimate = 1e13;

/// Gauss-Jordan inverse. Exact scalars use first-nonzero pivoting; float
/// scalars use partial pivoting and reject ill-conditioned input.
template <class T>
SquareMatrix<T> inverse(SquareMatrix<T> a) {
  const int n = a.dim();
  SquareMatrix<T> inv = SquareMatrix<T>::identity(n);
  const double scale = a.max_abs();
  double min_pivot = 0.0;
  for (int col = 0; col < n; ++col) {
    int piv = detail::choose_pivot(a, col);
    if (piv < 0) throw SingularPointError("singular matrix in inverse()");
    detail::swap_rows(a, piv, col);
    detail::swap_rows(inv, piv, col);
    T p = a(col, col);
    if constexpr (!is_exact_v<T>) {
      double mag = scalar_traits<T>::magnitude(p);
      min_pivot = (col == 0) ? mag : std::min(min_pivot, mag);
    }
    for (int c = 0; c < n; ++c) {
      a(col, c) = a(col, c) / p;
      inv(col, c) = inv(col, c) / p;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col || is_zero(a(r, col))) continue;
      T f = a(r, col);
      for (int c = 0; c < n; ++c) {
        a(r, c) -= f * a(col, c);
        inv(r, c) -= f * inv(col, c);
      }
    }
  }
  if constexpr (!is_exact_v<T>) {
    if (n > 0 && scale * inv.max_abs() > kMaxConditionEstimate) {
      throw SingularPointError("matrix too ill-conditioned to invert");
    }
  }
  return inv;
}

/// Determinant by Gaussian elimination (exact pivoting rule as inverse()).
template <class T>
T determinant(SquareMatrix<T> a) {
  const int n = a.dim();
  T det = from_int<T>(1);
  for (int col = 0; col < n; ++col) {
    int piv = detail::choose_pivot(a, col);
    if (piv < 0) return zero<T>();
    if (piv != col) {
      detail::swap_rows(a, piv, col);
      det = -det;
    }
    const T p = a(col, col);
    det = det * p;
    for (int r = col + 1; r < n; ++r) {
      if (is_zero(a(r, col))) continue;
      T f = a(r, col) / p;
      for (int c = col; c < n; ++c) a(r, c) -= f * a(col, c);
    }
  }
  return det;
}

/// A^e for any integer e (negative powers go through the inverse).
template <class T>
SquareMatrix<T> power(const SquareMatrix<T>& a, int e) {
  if (e < 0) return power(inverse(a), -e);
  SquareMatrix<T> result = SquareMatrix<T>::identity(a.dim());
  SquareMatrix<T> base = a;
  while (e > 0) {
    if (e & 1) result = result * base;
    e >>= 1;
    if (e) base = base * base;
  }
  return result;
}

template <class T>
SquareMatrix<T> commutator(const SquareMatrix<T>& a, const SquareMatrix<T>& b) {
  return a * b - b * a;
}

/// Solve A x = b (float or exact), same pivoting rules as inverse().
template <class T>
std::vector<T> solve(SquareMatrix<T> a, std::vector<T> b) {
  const int n = a.dim();
  if (static_cast<int>(b.size()) != n) throw ArityError("solve: size mismatch");
  for (int col = 0; col < n; ++col) {
    int piv = detail::choose_pivot(a, col);
    if (piv < 0) throw SingularPointError("singular matrix in solve()");
    detail::swap_rows(a, piv, col);
    std::swap(b[piv], b[col]);
    const T p = a(col, col);
    for (int r = col + 1; r < n; ++r) {
      if (is_zero(a(r, col))) continue;
      T f = a(r, col) / p;
      for (int c = col; c < n; ++c) a(r, c) -= f * a(col, c);
      b[r] -= f * b[col];
    }
  }
  std::vector<T> x(n, zero<T>());
  for (int r = n - 1; r >= 0; --r) {
    T acc = b[r];
    for (int c = r + 1; c < n; ++c) acc -= a(r, c) * x[c];
    x[r] = acc / a(r, r);
  }
  return x;
}

}  // namespace cmsym
