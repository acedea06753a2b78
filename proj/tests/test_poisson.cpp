#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cmsym/poisson.hpp"
#include "testing.hpp"

using namespace cmsym;
using GR = GaussianRational;

namespace {

IdentityTest test_setup(int N, const Rational& s = Rational(1)) {
  IdentityTest t;
  t.N = N;
  t.params = ModelParams::exact(Rational(1, 2), s);
  t.seed = 3;
  t.samples = 4;
  return t;
}

}  // namespace

TEST_CASE("canonical pairs") {
  auto pt = sample_point(3, ModelParams::exact(Rational(1, 2), Rational(0)), SamplerConfig{}, 1, 0);
  for (int i = 1; i <= 3; ++i)
    for (int j = 1; j <= 3; ++j) {
      CHECK(bracket(Observable::x(i), Observable::p(j), pt) == GR(i == j ? 1 : 0));
      CHECK(bracket(Observable::x(i), Observable::x(j), pt).is_zero());
      CHECK(bracket(Observable::p(i), Observable::p(j), pt).is_zero());
    }
}

TEST_CASE("antisymmetry and Leibniz rule") {
  auto pt = sample_point(3, ModelParams::exact(Rational(1, 2), Rational(1)), SamplerConfig{}, 2, 0);
  Observable f = Observable::K(3, 1), g = Observable::Ktilde(2, 1), h = Observable::J(2);
  CHECK(bracket(f, g, pt) == -bracket(g, f, pt));
  CHECK(bracket(f, f, pt).is_zero());
  // {f, g h} = {f, g} h + g {f, h}
  GR lhs = bracket(f, Observable::product(g, h), pt);
  GR rhs = bracket(f, g, pt) * eval(h, pt) + eval(g, pt) * bracket(f, h, pt);
  CHECK(lhs == rhs);
}

TEST_CASE("{J1, F1} = N") {
  for (int N = 1; N <= 5; ++N) {
    auto pt = sample_point(N, ModelParams::exact(Rational(1, 2), Rational(0)), SamplerConfig{}, 1, 0);
    CHECK(bracket(Observable::J(1), Observable::F(1), pt) == GR(N));
  }
}

TEST_CASE("float brackets agree with exact") {
  auto pt = sample_point(4, ModelParams::exact(Rational(1, 2), Rational(1)), SamplerConfig{}, 6, 0);
  auto fp = convert_point<ComplexFloat>(pt);
  Observable a = Observable::Ktilde(3, 1), b = Observable::Ktilde(4, 2);
  GR e = bracket(a, b, pt);
  ComplexFloat f = bracket(a, b, fp);
  CHECK(std::abs(f - e.to_complex()) < 1e-9 * std::max(1.0, std::abs(f)));
}

TEST_CASE("Jacobi identity by nested jets") {
  auto pt = sample_point(2, ModelParams::exact(Rational(1, 2), Rational(1)), SamplerConfig{}, 4, 0);
  CHECK(jacobi_check(Observable::x(1), Observable::p(1), Observable::x(2), pt).is_zero());
  CHECK(jacobi_check(Observable::F(1), Observable::F(2), Observable::K(2, 1), pt).is_zero());
  CHECK(jacobi_check(Observable::F(1), Observable::K(2, 1), Observable::Ktilde(2, 1), pt).is_zero());
  auto p3 = sample_point(3, ModelParams::exact(Rational(1, 2), Rational(1)), SamplerConfig{}, 4, 1);
  CHECK(jacobi_check(Observable::K(2, 1), Observable::K(3, 1), Observable::J(3), p3).is_zero());
  // second derivatives of F2 = sum p^2 - ...: d2/dp1^2 = 2
  auto H = hessian(Observable::F(2), pt);
  CHECK(H.hess[2][2] == GR(2));
  CHECK(H.hess[0][2].is_zero());
}

TEST_CASE("identity families hold and a perturbed identity is refuted") {
  auto t = test_setup(4, Rational(0));
  auto ff = verify_identity("{F1,F2}", t, [](const PhasePoint<GR>& pt) {
    return bracket(Observable::F(1), Observable::F(2), pt);
  });
  CHECK(ff.holds());
  CHECK(ff.samples == 4);

  auto jj = verify_identity("{J2,J3}", t, [](const PhasePoint<GR>& pt) {
    return bracket(Observable::J(2), Observable::J(3), pt) - eval(Observable::J(3), pt);
  });
  CHECK(jj.holds());

  auto bad = verify_identity("{F1,F2} = 1", t, [](const PhasePoint<GR>& pt) {
    return bracket(Observable::F(1), Observable::F(2), pt) - GR(1);
  });
  CHECK(bad.kind == VerdictKind::refuted);
  REQUIRE(bad.witness.has_value());
  CHECK(bad.witness->sample == 0);
  CHECK(bad.witness->residual == "-1");
  CHECK(bad.witness->x.size() == 4u);
}

TEST_CASE("sampler rejects singular draws and errors are reported") {
  auto t = test_setup(2);
  int calls = 0;
  auto v = verify_identity_serial("reject first", t, [&calls](const PhasePoint<GR>&) -> GR {
    if (calls++ % 2 == 0) throw SingularPointError("forced");
    return GR(0);
  });
  CHECK(v.holds());
  CHECK(v.rejected == 4);

  auto e = verify_identity_serial("broken", t, [](const PhasePoint<GR>&) -> GR { throw BranchFailure("no"); });
  CHECK(e.kind == VerdictKind::error);
  CHECK(e.diagnostic.find("no") != std::string::npos);
}

TEST_CASE("serial and parallel runs agree") {
  auto t = test_setup(3);
  std::vector<std::string> names{"{F2,Kt21}", "{Kt31,Kt32}"};
  auto fn = [](const PhasePoint<GR>& pt) {
    auto g = gradients<GR>({Observable::F(2), Observable::Ktilde(2, 1), Observable::Ktilde(3, 1),
                            Observable::Ktilde(3, 2)},
                           pt);
    return std::vector<GR>{bracket(g, 0, 1), bracket(g, 2, 3)};
  };
  auto a = verify_family(names, t, fn);
  auto b = verify_family_serial(names, t, fn);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].kind == b[i].kind);
    CHECK(a[i].max_residual == b[i].max_residual);
  }
  // these brackets are nonzero, so both refute with the same witness
  CHECK(a[0].kind == VerdictKind::refuted);
  CHECK(a[0].witness->residual == b[0].witness->residual);
}
