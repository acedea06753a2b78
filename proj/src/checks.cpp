#include "cmsym/checks.hpp"

namespace cmsym {

namespace {

using GR = GaussianRational;

IdentityTest make_test(int N, const CheckConfig& cfg) {
  IdentityTest t;
  t.N = N;
  t.params = cfg.params;
  t.sampler = cfg.sampler;
  t.seed = cfg.seed;
  t.samples = cfg.samples;
  t.tol = cfg.tol;
  return t;
}

template <class Fn>
std::vector<Verdict> run(const std::vector<std::string>& names, int N, const CheckConfig& cfg, Fn fn) {
  IdentityTest t = make_test(N, cfg);
  return cfg.parallel ? verify_family<GR>(names, t, fn) : verify_family_serial<GR>(names, t, fn);
}

}  // namespace

GR generator_value(const Var& v, EvalContext<GR>& ctx) {
  switch (v.kind) {
    case VarKind::F:
      return ctx.F(v.m);
    case VarKind::K:
    case VarKind::Kzero:
      return ctx.K(v.m, v.n);
    case VarKind::Kt:
    case VarKind::Ktzero:
      return ctx.Ktilde(v.m, v.n);
    case VarKind::S:
      if (ctx.params().mode != Mode::exact) throw UnsupportedParameterError("s is exact-mode only");
      return GR(ctx.params().s);
  }
  return GR(0);
}

std::vector<Verdict> check_table_pointwise(const BracketTable& table, const CheckConfig& cfg) {
  std::vector<std::string> names;
  for (const auto& e : table.entries) names.push_back("{" + e.a.name() + "," + e.b.name() + "}");
  std::vector<Observable> obs;
  for (const auto& g : table.generators) obs.push_back(generator_observable(g));
  auto index_of = [&](const Var& v) {
    for (std::size_t k = 0; k < table.generators.size(); ++k)
      if (table.generators[k] == v) return k;
    throw ArityError("entry uses a non-generator " + v.name());
  };
  return run(names, table.N, cfg, [&](const PhasePoint<GR>& pt) {
    GradientSet<GR> g = gradients(obs, pt);
    EvalContext<GR> ctx(pt);
    std::function<GR(const Var&)> value = [&](const Var& v) { return generator_value(v, ctx); };
    std::vector<GR> res;
    res.reserve(table.entries.size());
    for (const auto& e : table.entries) {
      GR lhs = bracket(g, index_of(e.a), index_of(e.b));
      res.push_back(lhs - e.value.evaluate<GR>(value));
    }
    return res;
  });
}

std::vector<Verdict> check_auxiliary_identities(int N, const CheckConfig& cfg, int max_index) {
  const int M = max_index > 0 ? max_index : 2 * N - 1;
  std::vector<std::string> names;
  std::vector<Observable> obs;
  for (int k = 1; k <= M; ++k) obs.push_back(Observable::F(k));
  for (int k = 1; k <= M; ++k) obs.push_back(Observable::J(k));
  auto Fi = [](int k) { return static_cast<std::size_t>(k - 1); };
  auto Ji = [M](int k) { return static_cast<std::size_t>(M + k - 1); };
  for (int m = 1; m <= M; ++m)
    for (int n = 1; n <= M; ++n) {
      names.push_back("{F" + std::to_string(m) + ",F" + std::to_string(n) + "}=0");
      names.push_back("{J" + std::to_string(m) + ",F" + std::to_string(n) + "}=" + std::to_string(n) + "F" +
                      std::to_string(m + n - 2));
      names.push_back("{J" + std::to_string(m) + ",J" + std::to_string(n) + "}=" + std::to_string(n - m) + "J" +
                      std::to_string(m + n - 2));
    }
  return run(names, N, cfg, [&](const PhasePoint<GR>& pt) {
    GradientSet<GR> g = gradients(obs, pt);
    EvalContext<GR> ctx(pt);
    std::vector<GR> res;
    for (int m = 1; m <= M; ++m)
      for (int n = 1; n <= M; ++n) {
        res.push_back(bracket(g, Fi(m), Fi(n)));
        res.push_back(bracket(g, Ji(m), Fi(n)) - GR(n) * ctx.F(m + n - 2));
        // J_0 enters only with coefficient n - m = 0
        GR rhs = (n == m) ? GR(0) : GR(n - m) * ctx.J(m + n - 2);
        res.push_back(bracket(g, Ji(m), Ji(n)) - rhs);
      }
    return res;
  });
}

std::vector<Verdict> check_functional_relations(int N, Model model, const CheckConfig& cfg) {
  const std::string K = model == Model::continuous ? "K" : "Kt";
  struct Rel {
    int kind, a, b, c;
  };
  std::vector<Rel> rels;
  std::vector<std::string> names;
  for (int i = 0; i <= N; ++i)
    for (int j = i; j <= N; ++j)
      for (int n = j; n <= N; ++n) {
        rels.push_back({0, i, j, n});
        names.push_back("F" + std::to_string(j) + " " + K + pair_suffix(n, i) + " - F" + std::to_string(i) + " " +
                        K + pair_suffix(n, j) + " + F" + std::to_string(n) + " " + K + pair_suffix(i, j) + " = 0");
      }
  for (int a = 1; a <= N; ++a)
    for (int b = a + 1; b <= N; ++b) {
      rels.push_back({1, a, b, 0});
      names.push_back("F" + std::to_string(b) + " " + K + pair_suffix(a, 0) + " - F" + std::to_string(a) + " " + K +
                      pair_suffix(b, 0) + " = N " + K + pair_suffix(a, b));
    }
  for (int j = 2; j <= N; ++j)
    for (int n = j + 1; n <= N; ++n) {
      rels.push_back({2, j, n, 0});
      names.push_back("F" + std::to_string(j) + " G" + std::to_string(n - 1) + " - F1 " + K + pair_suffix(n, j) +
                      " - F" + std::to_string(n) + " G" + std::to_string(j - 1) + " = 0");
    }
  return run(names, N, cfg, [&](const PhasePoint<GR>& pt) {
    EvalContext<GR> ctx(pt);
    std::vector<GR> res;
    for (const auto& r : rels) {
      switch (r.kind) {
        case 0:
          res.push_back(functional_relation_check(r.a, r.b, r.c, ctx, model));
          break;
        case 1:
          res.push_back(k0_relation_check(r.a, r.b, ctx, model));
          break;
        default:
          res.push_back(reduced_relation_check(r.a, r.b, ctx, model));
      }
    }
    return res;
  });
}

std::vector<Verdict> check_ktilde_decomposition(int N, const CheckConfig& cfg) {
  std::vector<std::string> names;
  for (int m = 1; m <= N; ++m)
    for (int n = 0; n < m; ++n) names.push_back("Kt" + pair_suffix(m, n) + " = K" + pair_suffix(m, n) + " + a Kf1_" +
                                                pair_suffix(m + 1, n + 1));
  return run(names, N, cfg, [&](const PhasePoint<GR>& pt) {
    EvalContext<GR> ctx(pt);
    std::vector<GR> res;
    for (int m = 1; m <= N; ++m)
      for (int n = 0; n < m; ++n) res.push_back(ctx.Ktilde(m, n) - ctx.Ktilde_via_flow(m, n));
    return res;
  });
}

BracketTable mutate_table(const BracketTable& table) {
  BracketTable t = table;
  const VarKind kk = table.model == Model::continuous ? VarKind::K : VarKind::Kt;
  for (auto& e : t.entries) {
    if (e.a == Var::F(1) && e.b == Var{kk, 2, 1}) {
      e.value += PolyExpr(Var{kk, 2, 1});
      t.recompute_degrees();
      return t;
    }
  }
  throw ArityError("table has no {F1,K21} entry to mutate");
}

bool all_hold(const std::vector<Verdict>& v) {
  for (const auto& x : v)
    if (!x.holds()) return false;
  return true;
}

}  // namespace cmsym
