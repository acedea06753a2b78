#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cmsym/observables.hpp"
#include "cmsym/poisson.hpp"
#include "testing.hpp"

using namespace cmsym;
using GR = GaussianRational;

namespace {

PhasePoint<GR> point(int N, const Rational& s = Rational(1), std::uint64_t index = 0) {
  return sample_point(N, ModelParams::exact(Rational(1, 2), s), SamplerConfig{}, 5, index);
}

}  // namespace

TEST_CASE("F1 and F2 at the two-body reference point") {
  PhasePoint<GR> pt({GR(0), GR(1)}, {GR(0), GR(0)}, ModelParams::exact(Rational(1), Rational(0)));
  CHECK(eval(Observable::F(1), pt) == GR(0));
  CHECK(eval(Observable::F(2), pt) == GR(2));
  CHECK(eval(Observable::F(0), pt) == GR(2));
}

TEST_CASE("names parse and print") {
  for (const char* s : {"F3", "J2", "K31", "Kt32", "Kf1_42", "K10_3", "x1", "p2"}) {
    CHECK(Observable::parse(s).name() == s);
  }
  CHECK(Observable::parse("K13") == -Observable::parse("K31"));
  CHECK(Observable::parse("K22").kind() == ObsKind::zero);
  CHECK(pair_suffix(3, 1) == "31");
  CHECK(pair_suffix(10, 3) == "10_3");
  CHECK_THROWS(Observable::parse("Q1"));
}

TEST_CASE("K is skew and K_{m,m} vanishes") {
  auto pt = point(3);
  EvalContext<GR> ctx(pt);
  for (int m = 0; m <= 4; ++m) {
    CHECK(ctx.K(m, m).is_zero());
    for (int n = 0; n <= 4; ++n) CHECK(ctx.K(m, n) == -ctx.K(n, m));
  }
  CHECK(eval(Observable::K(2, 2), pt).is_zero());
  CHECK(eval(Observable::K(1, 3), pt) == -eval(Observable::K(3, 1), pt));
}

TEST_CASE("K^(2) is K and J_0 uses the inverse of L") {
  auto pt = point(3);
  EvalContext<GR> ctx(pt);
  for (int m = 1; m <= 4; ++m)
    for (int n = 1; n < m; ++n) CHECK(ctx.Kflow(2, m, n) == ctx.K(m, n));
  auto Linv = inverse(build_L(pt));
  GR j0(0);
  for (int i = 0; i < 3; ++i) j0 += pt.x[i] * Linv(i, i);
  CHECK(ctx.J(0) == j0);
  CHECK(ctx.J(1) == pt.x[0] + pt.x[1] + pt.x[2]);
}

TEST_CASE("Ktilde trace form equals K + alpha sqrt(h) K^(1)") {
  for (const Rational& s : {Rational(1), Rational(1, 3), Rational(0)}) {
    for (int N = 2; N <= 5; ++N) {
      auto pt = point(N, s, N);
      EvalContext<GR> ctx(pt);
      for (int m = 0; m <= N; ++m)
        for (int n = 0; n < m; ++n) CHECK(ctx.Ktilde(m, n) == ctx.Ktilde_via_flow(m, n));
    }
  }
  // at s = 0 Ktilde is K
  auto pt = point(3, Rational(0));
  EvalContext<GR> ctx(pt);
  CHECK(ctx.Ktilde(3, 1) == ctx.K(3, 1));
}

TEST_CASE("generator sets") {
  auto g = generator_set(4, Model::discrete);
  CHECK(g.members.size() == 10u);
  CHECK(g.fi_subset.size() == 7u);
  CHECK(g.members[4].name() == "Kt21");
  CHECK(g.fi_subset.back().name() == "Kt41");
  CHECK(generator_set(3, Model::continuous).members.back().name() == "K32");
}

TEST_CASE("three-body auxiliaries") {
  auto prm = ModelParams::exact(Rational(1, 2), Rational(0));
  PhasePoint<GR> pt({GR(0), GR(1), GR(3)}, {GR(0), GR(0), GR(0)}, prm);
  auto aux = eval_N3_auxiliaries(pt);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(aux.Y[i][j].is_zero());
  // A_1 = nu^2 (1 + 1/9)
  CHECK(aux.A[0] == GR(Rational(1, 4)) * GR(Rational(10, 9)));

  auto q = point(3, Rational(0));
  auto a = eval_N3_auxiliaries(q);
  CHECK(a.Y[0][1] == (q.p[0] * q.x[1] + q.p[1] * q.x[0]) / (q.x[0] - q.x[1]).pow(2));
  CHECK(a.Y[0][1] == a.Y[1][0]);
  // the A_i sum to F2 = sum p^2 + 2 nu^2 sum_{i<j} (x_i - x_j)^-2
  CHECK(a.A[0] + a.A[1] + a.A[2] == eval(Observable::F(2), q));
  CHECK_THROWS_AS(eval_N3_auxiliaries(point(2)), ArityError);
}

TEST_CASE("momentum orders") {
  auto pt = point(3);
  for (int k = 1; k <= 3; ++k) CHECK(momentum_order(Observable::F(k), pt) == k);
  // equal momenta would make K21 momentum-free at N = 2
  PhasePoint<GR> p2({GR(0), GR(2)}, {GR(1), GR(-3)}, ModelParams::exact(Rational(1, 2), Rational(1)));
  PhasePoint<GR> p2c({GR(0), GR(2)}, {GR(1), GR(-3)}, ModelParams::exact(Rational(1, 2), Rational(0)));
  CHECK(momentum_order(Observable::K(2, 1), p2c) == 2);
  CHECK(momentum_order(Observable::Ktilde(2, 1), p2) == 3);
  CHECK(momentum_order(Observable::K(3, 2), pt) == 4);
}

TEST_CASE("functional relations at random exact points") {
  for (Model model : {Model::continuous, Model::discrete}) {
    for (int index = 0; index < 3; ++index) {
      auto pt = point(3, Rational(1), index);
      EvalContext<GR> ctx(pt);
      CHECK(functional_relation_check(1, 2, 3, ctx, model).is_zero());
      CHECK(functional_relation_check(0, 1, 2, ctx, model).is_zero());
      CHECK(functional_relation_check(2, 2, 3, ctx, model).is_zero());
      CHECK(k0_relation_check(1, 2, ctx, model).is_zero());
      CHECK(k0_relation_check(2, 3, ctx, model).is_zero());
      CHECK(reduced_relation_check(2, 3, ctx, model).is_zero());
    }
  }
  // F2 Kt31 - F1 Kt32 - F3 Kt21 = 0
  auto pt = point(3);
  EvalContext<GR> ctx(pt);
  CHECK((ctx.F(2) * ctx.Ktilde(3, 1) - ctx.F(1) * ctx.Ktilde(3, 2) - ctx.F(3) * ctx.Ktilde(2, 1)).is_zero());
}

TEST_CASE("float evaluation agrees with exact") {
  auto pt = point(4);
  auto fp = convert_point<ComplexFloat>(pt);
  EvalContext<GR> e(pt);
  EvalContext<ComplexFloat> f(fp);
  for (int m = 1; m <= 4; ++m) {
    CHECK(std::abs(f.F(m) - e.F(m).to_complex()) < 1e-10 * std::max(1.0, std::abs(f.F(m))));
    for (int n = 1; n < m; ++n) {
      CHECK(std::abs(f.Ktilde(m, n) - e.Ktilde(m, n).to_complex()) <
            1e-10 * std::max(1.0, std::abs(f.Ktilde(m, n))));
    }
  }
}
