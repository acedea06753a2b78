#pragma once

#include <ostream>

namespace cmsym {

/// First-order forward jet: a value together with one directional derivative.
/// Nesting (Jet<Jet<T>>) gives mixed second derivatives.
template <class T>
struct Jet {
  T v{};
  T d{};

  Jet() = default;
  Jet(T value, T deriv) : v(std::move(value)), d(std::move(deriv)) {}
  explicit Jet(T value) : v(std::move(value)), d(v - v) {}

  Jet& operator+=(const Jet& o) {
    v += o.v;
    d += o.d;
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    v -= o.v;
    d -= o.d;
    return *this;
  }
  Jet& operator*=(const Jet& o) {
    d = v * o.d + d * o.v;
    v *= o.v;
    return *this;
  }
  Jet& operator/=(const Jet& o) {
    // (a/b)' = (a' b - a b') / b^2, written as (a' - q b') / b with q = a/b.
    T q = v / o.v;
    d = (d - q * o.d) / o.v;
    v = std::move(q);
    return *this;
  }

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(Jet a, const Jet& b) { return a *= b; }
  friend Jet operator/(Jet a, const Jet& b) { return a /= b; }
  Jet operator-() const { return {-v, -d}; }

  friend Jet operator*(Jet a, const T& s) {
    a.v *= s;
    a.d *= s;
    return a;
  }
  friend Jet operator*(const T& s, Jet a) { return std::move(a) * s; }

  friend bool operator==(const Jet& a, const Jet& b) { return a.v == b.v && a.d == b.d; }

  friend std::ostream& operator<<(std::ostream& os, const Jet& j) {
    return os << "(" << j.v << "; " << j.d << ")";
  }
};

}  // namespace cmsym
