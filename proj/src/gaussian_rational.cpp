#include "cmsym/gaussian_rational.hpp"

#include <cctype>
#include <ostream>

#include "cmsym/errors.hpp"

namespace cmsym {

GaussianRational GaussianRational::from_fractions(long p, long q, long r, long t) {
  if (q == 0 || t == 0) throw DomainError("zero denominator");
  return {Rational(p, q), Rational(r, t)};
}

GaussianRational GaussianRational::inverse() const {
  if (is_zero()) throw DomainError("inverse of zero Gaussian rational");
  Rational n = norm();
  return {re_ / n, -im_ / n};
}

GaussianRational GaussianRational::pow(int e) const {
  if (e < 0) return inverse().pow(-e);
  GaussianRational result(1);
  GaussianRational base = *this;
  while (e > 0) {
    if (e & 1) result *= base;
    e >>= 1;
    if (e) base *= base;
  }
  return result;
}

GaussianRational& GaussianRational::operator+=(const GaussianRational& o) {
  re_ += o.re_;
  im_ += o.im_;
  return *this;
}

GaussianRational& GaussianRational::operator-=(const GaussianRational& o) {
  re_ -= o.re_;
  im_ -= o.im_;
  return *this;
}

GaussianRational& GaussianRational::operator*=(const GaussianRational& o) {
  if (sgn(im_) == 0 && sgn(o.im_) == 0) {
    re_ *= o.re_;
    return *this;
  }
  Rational re = re_ * o.re_ - im_ * o.im_;
  Rational im = re_ * o.im_ + im_ * o.re_;
  re_ = std::move(re);
  im_ = std::move(im);
  return *this;
}

GaussianRational& GaussianRational::operator/=(const GaussianRational& o) {
  if (o.is_zero()) throw DomainError("division by zero Gaussian rational");
  if (sgn(o.im_) == 0) {
    re_ /= o.re_;
    im_ /= o.re_;
    return *this;
  }
  return *this *= o.inverse();
}

std::string rational_str(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::string GaussianRational::str() const {
  if (sgn(im_) == 0) return rational_str(re_);
  std::string imag = rational_str(Rational(::abs(im_))) + "*i";
  if (sgn(re_) == 0) return (sgn(im_) < 0 ? "-" : "") + imag;
  return rational_str(re_) + (sgn(im_) < 0 ? "-" : "+") + imag;
}

std::ostream& operator<<(std::ostream& os, const GaussianRational& z) { return os << z.str(); }

namespace {

class Scanner {
 public:
  explicit Scanner(std::string_view s) : s_(s) {}
  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool done() {
    skip_ws();
    return pos_ >= s_.size();
  }
  char peek() {
    skip_ws();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }
  bool accept(char c) {
    if (peek() != c) return false;
    ++pos_;
    return true;
  }
  bool digit_next() { return std::isdigit(static_cast<unsigned char>(peek())) != 0; }
  std::string digits() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected digits");
    return std::string(s_.substr(start, pos_ - start));
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("cannot parse Gaussian rational '" + std::string(s_) + "': " + what);
  }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;
};

// One signed term: [sign] (rational [ '*' ] 'i' | rational | 'i').
void parse_term(Scanner& sc, Rational& re, Rational& im, bool first) {
  int sign = 1;
  if (sc.accept('-')) {
    sign = -1;
  } else if (!sc.accept('+') && !first) {
    sc.fail("expected '+' or '-'");
  }
  Rational value(1);
  bool have_number = false;
  if (sc.digit_next()) {
    mpz_class num(sc.digits());
    mpz_class den(1);
    if (sc.accept('/')) {
      den = mpz_class(sc.digits());
      if (den == 0) throw DomainError("zero denominator in '" + num.get_str() + "/0'");
    }
    value = Rational(num, den);
    value.canonicalize();
    have_number = true;
  }
  bool imaginary = false;
  if (sc.accept('*')) {
    if (!sc.accept('i')) sc.fail("expected 'i' after '*'");
    imaginary = true;
  } else if (sc.accept('i')) {
    imaginary = true;
  }
  if (!have_number && !imaginary) sc.fail("empty term");
  if (sign < 0) value = -value;
  (imaginary ? im : re) += value;
}

}  // namespace

GaussianRational GaussianRational::parse(std::string_view text) {
  Scanner sc(text);
  if (sc.done()) sc.fail("empty input");
  Rational re(0), im(0);
  parse_term(sc, re, im, true);
  while (!sc.done()) parse_term(sc, re, im, false);
  return {re, im};
}

}  // namespace cmsym
