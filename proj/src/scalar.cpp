#include "cmsym/scalar.hpp"

#include <cmath>

namespace cmsym {

std::string to_string(Mode m) { return m == Mode::exact ? "exact" : "float"; }

std::string to_string(Convention c) { return c == Convention::repulsive ? "repulsive" : "attractive"; }

namespace {

GaussianRational apply_convention(GaussianRational nu, Convention c) {
  if (c == Convention::attractive) nu *= GaussianRational::i();
  return nu;
}

// sqrt(h / (2 nu)) for float-mode parameters.
double float_s(const ModelParams& p) {
  ComplexFloat ratio = ComplexFloat(p.h_float, 0.0) / (2.0 * p.nu.to_complex());
  if (std::abs(ratio.imag()) > 1e-14 * std::max(1.0, std::abs(ratio)) || ratio.real() < 0.0) {
    throw ConventionError("h/(2 nu) must be real and non-negative, got (" +
                          std::to_string(ratio.real()) + ", " + std::to_string(ratio.imag()) + ")");
  }
  return std::sqrt(ratio.real());
}

const GaussianRational kOnePlusI{Rational(1), Rational(1)};
const GaussianRational kIMinusOne{Rational(-1), Rational(1)};

}  // namespace

ModelParams ModelParams::exact(const Rational& nu, const Rational& s, Convention convention) {
  if (sgn(nu) == 0) throw ArityError("coupling nu must be nonzero");
  if (sgn(s) < 0) throw ConventionError("s must be non-negative");
  ModelParams p;
  p.mode = Mode::exact;
  p.convention = convention;
  p.nu = apply_convention(GaussianRational(nu), convention);
  p.s = s;
  return p;
}

ModelParams ModelParams::floating(double nu, double h, Convention convention) {
  if (nu == 0.0 || !std::isfinite(nu)) throw ArityError("coupling nu must be finite and nonzero");
  if (!(h >= 0.0) || !std::isfinite(h)) throw ConventionError("h must be finite and non-negative");
  ModelParams p;
  p.mode = Mode::floating;
  p.convention = convention;
  p.nu = apply_convention(GaussianRational(Rational(nu)), convention);
  p.h_float = h;
  return p;
}

ModelParams ModelParams::as_floating() const {
  if (mode == Mode::floating) return *this;
  ModelParams p = *this;
  p.mode = Mode::floating;
  ComplexFloat h = lattice_h<ComplexFloat>(*this);
  if (h.imag() != 0.0) throw ConventionError("complex lattice spacing has no float-mode form");
  p.h_float = h.real();
  return p;
}

template <>
GaussianRational lattice_h<GaussianRational>(const ModelParams& p) {
  if (p.mode != Mode::exact) throw UnsupportedParameterError("float-mode h has no exact value");
  return GaussianRational(2) * p.nu * GaussianRational(p.s * p.s);
}

template <>
ComplexFloat lattice_h<ComplexFloat>(const ModelParams& p) {
  if (p.mode == Mode::exact) return lattice_h<GaussianRational>(p).to_complex();
  return {p.h_float, 0.0};
}

template <>
GaussianRational alpha_sqrt_h<GaussianRational>(const ModelParams& p) {
  if (p.mode != Mode::exact) {
    throw UnsupportedParameterError("alpha*sqrt(h) is exact only under h = 2 nu s^2");
  }
  return kOnePlusI * GaussianRational(p.s);
}

template <>
ComplexFloat alpha_sqrt_h<ComplexFloat>(const ModelParams& p) {
  if (p.mode == Mode::exact) return alpha_sqrt_h<GaussianRational>(p).to_complex();
  return ComplexFloat(1.0, 1.0) * float_s(p);
}

template <>
GaussianRational c0<GaussianRational>(const ModelParams& p) {
  if (p.mode != Mode::exact) throw UnsupportedParameterError("c0 is exact only under h = 2 nu s^2");
  return p.nu * GaussianRational(p.s) * kIMinusOne;
}

template <>
ComplexFloat c0<ComplexFloat>(const ModelParams& p) {
  if (p.mode == Mode::exact) return c0<GaussianRational>(p).to_complex();
  return p.nu.to_complex() * float_s(p) * ComplexFloat(-1.0, 1.0);
}

template <>
GaussianRational h_over_c0<GaussianRational>(const ModelParams& p) {
  GaussianRational c = c0<GaussianRational>(p);
  if (c.is_zero()) return GaussianRational(0);
  return lattice_h<GaussianRational>(p) / c;
}

template <>
ComplexFloat h_over_c0<ComplexFloat>(const ModelParams& p) {
  ComplexFloat c = c0<ComplexFloat>(p);
  if (c == ComplexFloat(0.0, 0.0)) return {0.0, 0.0};
  return lattice_h<ComplexFloat>(p) / c;
}

}  // namespace cmsym
