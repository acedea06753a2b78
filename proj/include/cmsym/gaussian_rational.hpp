#pragma once

#include <gmpxx.h>

#include <complex>
#include <concepts>
#include <iosfwd>
#include <string>
#include <string_view>

namespace cmsym {

using Rational = mpq_class;

/// Exact element of Q(i). Both parts are kept in lowest terms with a positive
/// denominator, so structural equality is field equality.
class GaussianRational {
 public:
  GaussianRational() = default;
  template <std::integral I>
  GaussianRational(I v) : re_(static_cast<long>(v)) {}  // NOLINT(google-explicit-constructor)
  GaussianRational(Rational re) : re_(std::move(re)) { re_.canonicalize(); }  // NOLINT
  GaussianRational(Rational re, Rational im) : re_(std::move(re)), im_(std::move(im)) {
    re_.canonicalize();
    im_.canonicalize();
  }

  static GaussianRational i() { return {Rational(0), Rational(1)}; }
  /// p/q + (r/t) i from machine integers.
  static GaussianRational from_fractions(long p, long q, long r = 0, long t = 1);

  const Rational& re() const { return re_; }
  const Rational& im() const { return im_; }

  bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
  bool is_real() const { return sgn(im_) == 0; }

  GaussianRational conj() const { return {re_, -im_}; }
  /// |z|^2, exact.
  Rational norm() const { return re_ * re_ + im_ * im_; }
  GaussianRational inverse() const;
  GaussianRational pow(int e) const;

  GaussianRational& operator+=(const GaussianRational& o);
  GaussianRational& operator-=(const GaussianRational& o);
  GaussianRational& operator*=(const GaussianRational& o);
  GaussianRational& operator/=(const GaussianRational& o);

  friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
  friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
  friend GaussianRational operator*(GaussianRational a, const GaussianRational& b) { return a *= b; }
  friend GaussianRational operator/(GaussianRational a, const GaussianRational& b) { return a /= b; }
  GaussianRational operator-() const { return {-re_, -im_}; }

  friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }

  std::complex<double> to_complex() const { return {re_.get_d(), im_.get_d()}; }
  double abs() const { return std::abs(to_complex()); }

  /// Canonical "a/b+c/d*i" form; zero parts and unit denominators omitted.
  std::string str() const;
  static GaussianRational parse(std::string_view text);

 private:
  Rational re_{0};
  Rational im_{0};
};

std::ostream& operator<<(std::ostream& os, const GaussianRational& z);

/// Canonical text of a rational ("3", "-2/5").
std::string rational_str(const Rational& q);

}  // namespace cmsym
