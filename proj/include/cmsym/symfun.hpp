#pragma once

// Power sums, elementary symmetric polynomials and complete exponential Bell
// polynomials, generic over any commutative ring with rational constants
// (exact scalars, floats, jets, or symbolic polynomials).

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "cmsym/errors.hpp"
#include "cmsym/scalar.hpp"

namespace cmsym {

/// How to embed a rational constant into a ring. Scalars use lift();
/// symbolic types specialize this.
template <class R>
struct ring_traits {
  static R constant(const Rational& q) {
    if constexpr (std::is_same_v<base_t<R>, GaussianRational>) {
      return lift<R>(GaussianRational(q));
    } else {
      return lift<R>(base_t<R>(q.get_d()));
    }
  }
};

template <class R>
R ring_constant(const Rational& q) {
  return ring_traits<R>::constant(q);
}

namespace symfun {

/// A partition of k in multiplicity form: k = sum_i i * mult[i-1], together
/// with its integer weight k! / prod_i ((i!)^{j_i} j_i!).
struct Partition {
  std::vector<int> mult;
  mpz_class weight;
};

/// All partitions of k (memoized, thread-safe).
const std::vector<Partition>& partitions(int k);

mpz_class factorial(int k);

/// Complete exponential Bell polynomial B_k(y_1..y_k); B_0 = 1.
template <class R>
R bell(int k, std::span<const R> y) {
  if (k < 0) throw ArityError("bell: negative order");
  if (static_cast<int>(y.size()) < k) {
    throw ArityError("bell: need " + std::to_string(k) + " arguments, got " +
                     std::to_string(y.size()));
  }
  if (k == 0) return ring_constant<R>(Rational(1));
  R total = ring_constant<R>(Rational(0));
  for (const Partition& part : partitions(k)) {
    R term = ring_constant<R>(Rational(part.weight));
    for (int i = 0; i < k; ++i) {
      for (int rep = 0; rep < part.mult[i]; ++rep) term = term * y[i];
    }
    total = total + term;
  }
  return total;
}

/// e_1..e_N from power sums f_1..f_N by the Newton recursion
/// e_k = (1/k) sum_{i=1}^{k} (-1)^{i-1} e_{k-i} f_i.
template <class R>
std::vector<R> newton_elementary(std::span<const R> f, int N) {
  if (N < 0 || static_cast<int>(f.size()) < N) {
    throw ArityError("newton_elementary: need " + std::to_string(N) + " power sums, got " +
                     std::to_string(f.size()));
  }
  std::vector<R> e;
  e.reserve(N + 1);
  e.push_back(ring_constant<R>(Rational(1)));
  for (int k = 1; k <= N; ++k) {
    R acc = ring_constant<R>(Rational(0));
    for (int i = 1; i <= k; ++i) {
      R term = e[k - i] * f[i - 1];
      acc = (i % 2 == 1) ? acc + term : acc - term;
    }
    e.push_back(acc * ring_constant<R>(Rational(1, k)));
  }
  e.erase(e.begin());
  return e;
}

/// The Bell arguments (-0! f_1, -1! f_2, ..., -(k-1)! f_k).
template <class R>
std::vector<R> bell_arguments(std::span<const R> f, int k) {
  if (static_cast<int>(f.size()) < k) throw ArityError("bell_arguments: not enough power sums");
  std::vector<R> y;
  y.reserve(k);
  for (int i = 1; i <= k; ++i) y.push_back(f[i - 1] * ring_constant<R>(Rational(-factorial(i - 1))));
  return y;
}

/// e_k = ((-1)^k / k!) B_k(-0! f_1, ..., -(k-1)! f_k).
template <class R>
R elementary_via_bell(int k, std::span<const R> f) {
  if (k < 0 || static_cast<int>(f.size()) < k) {
    throw ArityError("elementary_via_bell: need " + std::to_string(k) + " power sums");
  }
  std::vector<R> y = bell_arguments(f, k);
  Rational scale(mpz_class(k % 2 == 0 ? 1 : -1), factorial(k));
  scale.canonicalize();
  return bell<R>(k, y) * ring_constant<R>(scale);
}

/// Coefficients c_1..c_N of the trace recursion f_{N+s} = sum_k c_k f_{N+s-k},
/// with c_k = -(1/k!) B_k(-0! f_1, ..., -(k-1)! f_k).
template <class R>
std::vector<R> trace_recurrence(std::span<const R> f, int N) {
  if (N < 1 || static_cast<int>(f.size()) < N) throw ArityError("trace_recurrence: need f_1..f_N");
  std::vector<R> y = bell_arguments(f, N);
  std::vector<R> c;
  c.reserve(N);
  for (int k = 1; k <= N; ++k) {
    Rational scale(mpz_class(-1), factorial(k));
    scale.canonicalize();
    c.push_back(bell<R>(k, std::span<const R>(y.data(), k)) * ring_constant<R>(scale));
  }
  return c;
}

/// f_1..f_upto, extending f_1..f_N through the Cayley-Hamilton recursion.
template <class R>
std::vector<R> extend_power_sums(std::span<const R> f, int N, int upto) {
  std::vector<R> c = trace_recurrence(f, N);
  std::vector<R> out(f.begin(), f.begin() + N);
  for (int t = N + 1; t <= upto; ++t) {
    R acc = ring_constant<R>(Rational(0));
    for (int k = 1; k <= N; ++k) acc = acc + c[k - 1] * out[t - k - 1];
    out.push_back(acc);
  }
  out.resize(std::max(upto, 0));
  return out;
}

/// f_{N+s} written through f_1..f_N only.
template <class R>
R trace_reduce(int N, std::span<const R> f, int s) {
  if (s < 1) throw ArityError("trace_reduce: s must be >= 1");
  return extend_power_sums(f, N, N + s).back();
}

}  // namespace symfun
}  // namespace cmsym
