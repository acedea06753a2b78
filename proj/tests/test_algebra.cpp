#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cmsym/algebra.hpp"
#include "cmsym/checks.hpp"
#include "testing.hpp"

using namespace cmsym;
using GR = GaussianRational;

namespace {

PolyExpr F(int k) { return PolyExpr::var(Var::F(k)); }
PolyExpr K(int m, int n) { return PolyExpr::var(Var{VarKind::K, m, n}); }
PolyExpr K0(int a) { return PolyExpr::var(Var{VarKind::Kzero, a, 0}); }

// every golden relation matches, and the table has no other entries
void check_golden_table(const BracketTable& t, const std::string& file) {
  auto lines = testing::load_golden(file);
  CHECK(lines.size() == t.entries.size());
  for (const auto& g : lines) {
    auto [a, b] = testing::bracket_pair(g.lhs);
    INFO(file << ": " << g.lhs << " computed " << t.bracket(a, b).str());
    CHECK(t.bracket(a, b) == g.rhs);
  }
}

void check_golden_closures(int N, Model model, const std::string& file) {
  AlgebraContext ctx(N, model);
  for (const auto& g : testing::load_golden(file)) {
    Observable o = Observable::parse(g.lhs);
    PolyExpr got = o.kind() == ObsKind::F ? ctx.reduce_F(o.idx()[0]) : ctx.reduce_K(o.idx()[0], o.idx()[1]);
    INFO(file << ": " << g.lhs << " computed " << got.str());
    CHECK(got == g.rhs);
  }
}

}  // namespace

TEST_CASE("N = 2 tables") {
  check_golden_table(build_table(2, Model::continuous), "n2_continuous.txt");
  check_golden_table(build_table(2, Model::discrete), "n2_discrete.txt");
}

TEST_CASE("N = 3 tables and closures") {
  check_golden_table(build_table(3, Model::continuous), "n3_continuous.txt");
  check_golden_table(build_table(3, Model::discrete), "n3_discrete.txt");
  check_golden_closures(3, Model::continuous, "n3_continuous_closures.txt");
  check_golden_closures(3, Model::discrete, "n3_discrete_closures.txt");
}

TEST_CASE("table text form") {
  auto t = build_table(3, Model::continuous);
  std::string text = table_to_text(t);
  CHECK(text.find("{K21,K32} = 5 F1 K32 - 4 F2 K31 + 3 F3 K21") != std::string::npos);
  CHECK(t.bracket(Var{VarKind::K, 2, 1}, Var{VarKind::K, 3, 1}) ==
        PolyExpr::parse("2 F1 K31 - 3 F2 K21 - 3 K32"));
  // reversed order applies antisymmetry
  CHECK(t.bracket(Var{VarKind::K, 3, 1}, Var{VarKind::K, 2, 1}) ==
        -t.bracket(Var{VarKind::K, 2, 1}, Var{VarKind::K, 3, 1}));
  CHECK(t.bracket(Var::F(1), Var::F(1)).is_zero());
}

TEST_CASE("formal bracket before elimination") {
  PolyExpr raw = formal_bracket(Var{VarKind::K, 2, 1}, Var{VarKind::K, 3, 1}, 3, Model::continuous);
  CHECK(raw == 2 * F(1) * K(3, 1) - F(2) * (3 * K(2, 1) + K0(3)) + F(3) * K0(2));
  // {F1, K21} with F0 = N
  CHECK(formal_bracket(Var::F(1), Var{VarKind::K, 2, 1}, 2, Model::continuous) == 2 * F(2) - F(1) * F(1));
}

TEST_CASE("eliminating K_{a,0}") {
  CHECK(eliminate_K0(F(3) * K0(2) - F(2) * K0(3), 3) == -3 * K(3, 2));
  PolyExpr plain = F(1) * K(2, 1);
  CHECK(eliminate_K0(plain, 3) == plain);
  GR c(2, -1);
  CHECK(eliminate_K0(c * (F(2) * K0(1) - F(1) * K0(2)), 2) == -c * GR(2) * K(2, 1));
  CHECK_THROWS_AS(eliminate_K0(F(1) * K0(2), 3), StructuralError);
}

TEST_CASE("Cayley-Hamilton closures") {
  CHECK(reduce_F(2, 1) == F(1) * F(1));
  CHECK(reduce_F(0, 3) == PolyExpr(GR(3)));
  CHECK(reduce_F(2, 3) == F(2));
  CHECK(reduce_K(3, 1, 3, Model::continuous) == K(3, 1));
  CHECK(reduce_K(4, 1, 3, Model::continuous) ==
        F(1) * K(3, 1) - GR(Rational(1, 2)) * (F(1) * F(1) - F(2)) * K(2, 1));
}

TEST_CASE("degrees") {
  const int cont[] = {2, 5, 7, 9};
  const int disc[] = {4, 6, 8, 10};
  for (int N = 2; N <= 5; ++N) {
    CHECK(build_table(N, Model::continuous).degree == cont[N - 2]);
    CHECK(build_table(N, Model::discrete).degree == disc[N - 2]);
  }
  CHECK(build_table(3, Model::continuous).graded_degree == 6);
}

TEST_CASE("F generators span an ideal") {
  CHECK(ideal_check(build_table(2, Model::continuous)));
  CHECK(ideal_check(build_table(3, Model::discrete)));
  CHECK(ideal_check(build_table(4, Model::continuous)));
  CHECK_FALSE(ideal_check(mutate_table(build_table(3, Model::continuous))));
}

TEST_CASE("s = 0 contraction gives the continuous table") {
  for (int N = 2; N <= 4; ++N) {
    auto c = contract_to_continuous(build_table(N, Model::discrete));
    CHECK(compare_tables(c, build_table(N, Model::continuous)).empty());
  }
  auto mutated = mutate_table(build_table(2, Model::continuous));
  auto diff = compare_tables(mutated, build_table(2, Model::continuous));
  REQUIRE(diff.size() == 1u);
  CHECK(diff[0] == "F1|K21");
}

TEST_CASE("JSON round-trip") {
  auto t = build_table(3, Model::discrete);
  auto j = table_to_json(t);
  auto back = table_from_json(j);
  CHECK(back.N == 3);
  CHECK(back.model == Model::discrete);
  CHECK(back.degree == t.degree);
  CHECK(compare_tables(back, t).empty());
  CHECK(table_to_json(back).dump() == j.dump());
  PolyExpr p = PolyExpr::parse("a (F1^2 - 2 F2) (F1^2 - F2) + 3/4*i K21");
  CHECK(poly_from_json(poly_to_json(p)) == p);
}

TEST_CASE("serial and parallel tables agree") {
  for (Model m : {Model::continuous, Model::discrete}) {
    auto a = build_table(4, m), b = build_table_serial(4, m);
    CHECK(compare_tables(a, b).empty());
    CHECK(table_to_json(a).dump() == table_to_json(b).dump());
  }
}

TEST_CASE("tables agree with canonical brackets at random points") {
  CheckConfig cfg;
  cfg.samples = 3;
  for (int N = 2; N <= 3; ++N) {
    for (Model m : {Model::continuous, Model::discrete}) {
      cfg.params = ModelParams::exact(Rational(1, 2), m == Model::continuous ? Rational(0) : Rational(1));
      CHECK(all_hold(check_table_pointwise(build_table(N, m), cfg)));
    }
  }
  cfg.params = ModelParams::exact(Rational(1, 2), Rational(0));
  auto bad = check_table_pointwise(mutate_table(build_table(3, Model::continuous)), cfg);
  CHECK_FALSE(all_hold(bad));
  int refuted = 0;
  for (const auto& v : bad) refuted += v.kind == VerdictKind::refuted;
  CHECK(refuted == 1);
}

TEST_CASE("auxiliary and functional relations") {
  CheckConfig cfg;
  cfg.samples = 2;
  CHECK(all_hold(check_auxiliary_identities(3, cfg)));
  CHECK(all_hold(check_functional_relations(3, Model::discrete, cfg)));
  CHECK(all_hold(check_ktilde_decomposition(3, cfg)));
  cfg.params = ModelParams::exact(Rational(1, 2), Rational(0));
  CHECK(all_hold(check_functional_relations(3, Model::continuous, cfg)));
}
