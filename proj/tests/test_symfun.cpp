#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cmsym/matrix.hpp"
#include "cmsym/polyexpr.hpp"
#include "cmsym/symfun.hpp"
#include "testing.hpp"

using namespace cmsym;
using GR = GaussianRational;

namespace {

// e_k by summing over all k-subsets
std::vector<GR> brute_elementary(const std::vector<GR>& v) {
  const int n = static_cast<int>(v.size());
  std::vector<GR> e(n + 1, GR(0));
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    GR prod(1);
    int k = 0;
    for (int i = 0; i < n; ++i) {
      if (mask & (1u << i)) {
        prod *= v[i];
        ++k;
      }
    }
    e[k] += prod;
  }
  e.erase(e.begin());
  return e;
}

std::vector<GR> power_sums(const std::vector<GR>& v, int upto) {
  std::vector<GR> f;
  for (int k = 1; k <= upto; ++k) {
    GR s(0);
    for (const auto& z : v) s += z.pow(k);
    f.push_back(s);
  }
  return f;
}

}  // namespace

TEST_CASE("partition counts and weights") {
  const int counts[] = {1, 1, 2, 3, 5, 7, 11, 15, 22};
  for (int k = 0; k <= 8; ++k) {
    CHECK(static_cast<int>(symfun::partitions(k).size()) == counts[k]);
    // weights count set partitions: Bell numbers
    mpz_class total = 0;
    for (const auto& p : symfun::partitions(k)) total += p.weight;
    const long bell_numbers[] = {1, 1, 2, 5, 15, 52, 203, 877, 4140};
    CHECK(total == bell_numbers[k]);
  }
  CHECK(symfun::factorial(10) == 3628800);
}

TEST_CASE("Bell polynomials in low order") {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 10; ++t) {
    std::vector<GR> y{testing::random_gr(rng), testing::random_gr(rng), testing::random_gr(rng)};
    CHECK(symfun::bell<GR>(0, y) == GR(1));
    CHECK(symfun::bell<GR>(1, y) == y[0]);
    CHECK(symfun::bell<GR>(2, y) == y[0] * y[0] + y[1]);
    CHECK(symfun::bell<GR>(3, y) == y[0].pow(3) + GR(3) * y[0] * y[1] + y[2]);
  }
  std::vector<GR> few{GR(1)};
  CHECK_THROWS_AS(symfun::bell<GR>(2, few), ArityError);
}

TEST_CASE("three variables 1, 2, 3") {
  std::vector<GR> v{GR(1), GR(2), GR(3)};
  auto f = power_sums(v, 3);
  auto e = symfun::newton_elementary<GR>(f, 3);
  CHECK(e == std::vector<GR>{GR(6), GR(11), GR(6)});
  for (int k = 1; k <= 3; ++k) CHECK(symfun::elementary_via_bell<GR>(k, f) == e[k - 1]);
}

TEST_CASE("trace recursion on small root sets") {
  // (1, 2) power sums f1 = 3, f2 = 5 give f3 = 9
  std::vector<GR> f{GR(3), GR(5)};
  CHECK(symfun::trace_reduce<GR>(2, f, 1) == GR(9));
  // (1, 1, 2): f = 4, 6, 10 -> f4 = 18
  std::vector<GR> g{GR(4), GR(6), GR(10)};
  CHECK(symfun::trace_reduce<GR>(3, g, 1) == GR(18));
}

TEST_CASE("f3 = 7 for f1 = 1, f2 = 5") {
  // roots 2 and -1
  std::vector<GR> f{GR(1), GR(5)};
  CHECK(symfun::trace_reduce<GR>(2, f, 1) == GR(7));
}

TEST_CASE("Newton, Bell and brute force agree on random variable sets") {
  std::mt19937_64 rng(17);
  for (int n = 1; n <= 6; ++n) {
    for (int t = 0; t < 8; ++t) {
      std::vector<GR> v(n);
      for (auto& z : v) z = testing::random_gr(rng);
      auto f = power_sums(v, n);
      auto brute = brute_elementary(v);
      auto newton = symfun::newton_elementary<GR>(f, n);
      REQUIRE(newton.size() == brute.size());
      for (int k = 1; k <= n; ++k) {
        CHECK(newton[k - 1] == brute[k - 1]);
        CHECK(symfun::elementary_via_bell<GR>(k, f) == brute[k - 1]);
      }
    }
  }
}

TEST_CASE("trace_reduce matches direct traces of matrix powers") {
  std::mt19937_64 rng(19);
  for (int n = 1; n <= 6; ++n) {
    for (int t = 0; t < 3; ++t) {
      SquareMatrix<GR> A(n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) A(i, j) = testing::random_gr(rng, 5, 3);
      std::vector<GR> f;
      SquareMatrix<GR> P = A;
      for (int k = 1; k <= 2 * n; ++k) {
        f.push_back(P.trace());
        P = P * A;
      }
      for (int s = 1; s <= n; ++s) {
        CHECK(symfun::trace_reduce<GR>(n, f, s) == f[n + s - 1]);
      }
      auto ext = symfun::extend_power_sums<GR>(f, n, 2 * n);
      for (int k = 0; k < 2 * n; ++k) CHECK(ext[k] == f[k]);
    }
  }
}

TEST_CASE("kernel is generic over float and symbolic rings") {
  std::vector<ComplexFloat> v{{1.5, 0.0}, {-0.5, 1.0}, {2.0, -0.25}};
  std::vector<ComplexFloat> f;
  for (int k = 1; k <= 3; ++k) {
    ComplexFloat s = 0.0;
    for (auto z : v) s += std::pow(z, k);
    f.push_back(s);
  }
  auto e = symfun::newton_elementary<ComplexFloat>(f, 3);
  CHECK(std::abs(e[2] - v[0] * v[1] * v[2]) < 1e-12);

  // symbolic: F_3 for N = 2 is -F1^3/2 + 3 F1 F2 / 2
  std::vector<PolyExpr> F{PolyExpr::var(Var::F(1)), PolyExpr::var(Var::F(2))};
  PolyExpr f3 = symfun::trace_reduce<PolyExpr>(2, F, 1);
  CHECK(f3 == PolyExpr::parse("-1/2 F1^3 + 3/2 F1 F2"));
}

TEST_CASE("arity errors") {
  std::vector<GR> f{GR(1)};
  CHECK_THROWS_AS(symfun::newton_elementary<GR>(f, 2), ArityError);
  CHECK_THROWS_AS(symfun::trace_reduce<GR>(1, f, 0), ArityError);
  CHECK_THROWS_AS(symfun::elementary_via_bell<GR>(3, f), ArityError);
}
