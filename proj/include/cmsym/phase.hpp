#pragma once

#include <string>
#include <vector>

#include "cmsym/errors.hpp"
#include "cmsym/matrix.hpp"
#include "cmsym/scalar.hpp"

namespace cmsym {

/// Minimum position separation accepted in floating point.
inline constexpr double kDefaultSeparation = 1e-8;

/// N-body configuration (x, p) plus model parameters. The scalar may be a
/// base field or a jet over one.
template <class T>
struct PhasePoint {
  int N = 0;
  std::vector<T> x;
  std::vector<T> p;
  ModelParams params;

  PhasePoint() = default;
  PhasePoint(std::vector<T> xs, std::vector<T> ps, ModelParams prm)
      : N(static_cast<int>(xs.size())), x(std::move(xs)), p(std::move(ps)), params(std::move(prm)) {
    if (x.size() != p.size()) throw ArityError("positions and momenta differ in length");
    if (N < 1) throw ArityError("phase point needs N >= 1");
  }
};

/// Throws SingularPointError unless positions are pairwise distinct
/// (exactly in exact arithmetic, by eps otherwise).
template <class T>
void check_separation(const std::vector<T>& x, double eps = kDefaultSeparation) {
  const int n = static_cast<int>(x.size());
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const auto d = primal(x[i]) - primal(x[j]);
      bool bad;
      if constexpr (is_exact_v<T>) {
        bad = d.is_zero();
      } else {
        bad = std::abs(d) < eps;
      }
      if (bad) {
        throw SingularPointError("coincident positions x" + std::to_string(i + 1) + " and x" +
                                 std::to_string(j + 1));
      }
    }
  }
}

/// L_jj = p_j, L_jk = i nu / (x_j - x_k).
template <class T>
SquareMatrix<T> build_L(const std::vector<T>& x, const std::vector<T>& p, const ModelParams& prm) {
  check_separation(x);
  const int n = static_cast<int>(x.size());
  const T inu = lift<T>(coupling<base_t<T>>(prm) * convert<base_t<T>>(GaussianRational::i()));
  SquareMatrix<T> L(n);
  for (int j = 0; j < n; ++j) {
    L(j, j) = p[j];
    for (int k = 0; k < n; ++k) {
      if (k != j) L(j, k) = inu / (x[j] - x[k]);
    }
  }
  return L;
}

template <class T>
SquareMatrix<T> build_L(const PhasePoint<T>& pt) {
  return build_L(pt.x, pt.p, pt.params);
}

/// M_jk = i nu/(x_j - x_k)^2 off the diagonal; rows sum to zero.
template <class T>
SquareMatrix<T> build_M(const PhasePoint<T>& pt) {
  check_separation(pt.x);
  const int n = pt.N;
  const T inu = lift<T>(coupling<base_t<T>>(pt.params) * convert<base_t<T>>(GaussianRational::i()));
  SquareMatrix<T> M(n);
  for (int j = 0; j < n; ++j) {
    T diag = zero<T>();
    for (int k = 0; k < n; ++k) {
      if (k == j) continue;
      T d = pt.x[j] - pt.x[k];
      M(j, k) = inu / (d * d);
      diag -= M(j, k);
    }
    M(j, j) = diag;
  }
  return M;
}

template <class T>
SquareMatrix<T> build_X(const PhasePoint<T>& pt) {
  return SquareMatrix<T>::diagonal(pt.x);
}

/// Mtilde_jk = c0 / (xbar_j - x_k + c0).
template <class T>
SquareMatrix<T> build_Mtilde(const PhasePoint<T>& pt, const std::vector<T>& xbar) {
  if (static_cast<int>(xbar.size()) != pt.N) throw ArityError("xbar has wrong length");
  const T c = lift<T>(c0<base_t<T>>(pt.params));
  SquareMatrix<T> M(pt.N);
  for (int j = 0; j < pt.N; ++j) {
    for (int k = 0; k < pt.N; ++k) {
      T den = xbar[j] - pt.x[k] + c;
      if (primal_is_zero(den)) throw SingularPointError("vanishing denominator in Mtilde");
      M(j, k) = c / den;
    }
  }
  return M;
}

}  // namespace cmsym
