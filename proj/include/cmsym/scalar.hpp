#pragma once

#include <complex>
#include <string>
#include <type_traits>

#include "cmsym/errors.hpp"
#include "cmsym/gaussian_rational.hpp"
#include "cmsym/jet.hpp"

namespace cmsym {

using ComplexFloat = std::complex<double>;

// ---------------------------------------------------------------------------
// Scalar traits. A "base" scalar is GaussianRational or ComplexFloat; jets of
// any depth sit on top of one of them.

template <class T>
struct scalar_traits;

template <>
struct scalar_traits<GaussianRational> {
  using base = GaussianRational;
  static constexpr bool exact = true;
  static bool is_zero(const GaussianRational& z) { return z.is_zero(); }
  static double magnitude(const GaussianRational& z) { return z.abs(); }
  static const base& primal(const GaussianRational& z) { return z; }
};

template <>
struct scalar_traits<ComplexFloat> {
  using base = ComplexFloat;
  static constexpr bool exact = false;
  static bool is_zero(const ComplexFloat& z) { return z == ComplexFloat(0.0, 0.0); }
  static double magnitude(const ComplexFloat& z) { return std::abs(z); }
  static const base& primal(const ComplexFloat& z) { return z; }
};

template <class T>
struct scalar_traits<Jet<T>> {
  using base = typename scalar_traits<T>::base;
  static constexpr bool exact = scalar_traits<T>::exact;
  static bool is_zero(const Jet<T>& z) { return scalar_traits<T>::is_zero(z.v) && scalar_traits<T>::is_zero(z.d); }
  static double magnitude(const Jet<T>& z) { return scalar_traits<T>::magnitude(z.v); }
  static const base& primal(const Jet<T>& z) { return scalar_traits<T>::primal(z.v); }
};

template <class T>
using base_t = typename scalar_traits<T>::base;

template <class T>
inline constexpr bool is_exact_v = scalar_traits<T>::exact;

/// True only when the value and every derivative vanish.
template <class T>
bool is_zero(const T& z) {
  return scalar_traits<T>::is_zero(z);
}

/// Value part with every derivative stripped.
template <class T>
const base_t<T>& primal(const T& z) {
  return scalar_traits<T>::primal(z);
}

template <class T>
bool primal_is_zero(const T& z) {
  return scalar_traits<base_t<T>>::is_zero(primal(z));
}

/// Embed a base scalar as a constant (zero derivative) of type T.
template <class T>
T lift(const base_t<T>& b) {
  if constexpr (std::is_same_v<T, base_t<T>>) {
    return b;
  } else {
    using Inner = decltype(T{}.v);
    return T(lift<Inner>(b), lift<Inner>(base_t<T>{}));
  }
}

template <class T>
T zero() {
  return lift<T>(base_t<T>{});
}

template <class T>
T from_int(long v) {
  return lift<T>(base_t<T>(v));
}

/// Convert an exact value into another base field (exact -> float is allowed,
/// float -> exact uses the exact binary value of the double).
template <class B>
B convert(const GaussianRational& z) {
  if constexpr (std::is_same_v<B, GaussianRational>) {
    return z;
  } else {
    return z.to_complex();
  }
}

template <class B>
B convert(const ComplexFloat& z) {
  if constexpr (std::is_same_v<B, ComplexFloat>) {
    return z;
  } else {
    return GaussianRational(Rational(z.real()), Rational(z.imag()));
  }
}

inline ComplexFloat to_complex(const GaussianRational& z) { return z.to_complex(); }
inline ComplexFloat to_complex(const ComplexFloat& z) { return z; }

// ---------------------------------------------------------------------------
// Model parameters.

enum class Mode { exact, floating };
enum class Convention { repulsive, attractive };

std::string to_string(Mode m);
std::string to_string(Convention c);

/// Coupling and lattice spacing. In exact mode h is parameterized as
/// h = 2 nu s^2 with rational s, which keeps alpha*sqrt(h) = (1+i)s and
/// c0 inside Q(i). The attractive convention is applied once, here, as
/// nu -> i nu; everything downstream sees only the effective coupling.
struct ModelParams {
  Mode mode = Mode::exact;
  Convention convention = Convention::repulsive;
  GaussianRational nu{1};  // effective coupling
  Rational s{0};           // exact mode
  double h_float = 0.0;    // float mode

  static ModelParams exact(const Rational& nu, const Rational& s,
                           Convention convention = Convention::repulsive);
  static ModelParams floating(double nu, double h, Convention convention = Convention::repulsive);

  /// Same model, evaluated in floating point (exact values are converted).
  ModelParams as_floating() const;
};

/// Lattice spacing h.
template <class B>
B lattice_h(const ModelParams& p);

/// alpha*sqrt(h) with alpha = (1+i)/sqrt(2 nu).
template <class B>
B alpha_sqrt_h(const ModelParams& p);

/// The constant c0 of the discrete map, c0^2 = -i h nu. The root is the one
/// with -h/c0 = alpha*sqrt(h), i.e. c0 = nu s (i - 1) in exact mode.
template <class B>
B c0(const ModelParams& p);

/// h / c0, computed from h and c0 separately (zero at h = 0).
template <class B>
B h_over_c0(const ModelParams& p);

template <>
GaussianRational lattice_h<GaussianRational>(const ModelParams& p);
template <>
ComplexFloat lattice_h<ComplexFloat>(const ModelParams& p);
template <>
GaussianRational alpha_sqrt_h<GaussianRational>(const ModelParams& p);
template <>
ComplexFloat alpha_sqrt_h<ComplexFloat>(const ModelParams& p);
template <>
GaussianRational c0<GaussianRational>(const ModelParams& p);
template <>
ComplexFloat c0<ComplexFloat>(const ModelParams& p);
template <>
GaussianRational h_over_c0<GaussianRational>(const ModelParams& p);
template <>
ComplexFloat h_over_c0<ComplexFloat>(const ModelParams& p);

template <class B>
B coupling(const ModelParams& p) {
  if constexpr (std::is_same_v<B, GaussianRational>) {
    return p.nu;
  } else {
    return p.nu.to_complex();
  }
}

}  // namespace cmsym
