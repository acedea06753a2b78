#pragma once

// Pointwise verification suites built on the poisson kernels: table entries
// against canonical brackets, the F/J bracket relations, and the functional
// relations among the generators.

#include <cstdint>
#include <string>
#include <vector>

#include "cmsym/algebra.hpp"
#include "cmsym/poisson.hpp"

namespace cmsym {

struct CheckConfig {
  ModelParams params = ModelParams::exact(Rational(1, 2), Rational(1));
  SamplerConfig sampler;
  std::uint64_t seed = 1;
  int samples = 5;
  double tol = 1e-9;  // float mode only
  bool parallel = true;
};

/// Variable values of the generators (and s) at an evaluation context.
GaussianRational generator_value(const Var& v, EvalContext<GaussianRational>& ctx);

/// One verdict per table entry: {a,b}(pt) == entry(pt) exactly.
std::vector<Verdict> check_table_pointwise(const BracketTable& table, const CheckConfig& cfg);

/// {F_m,F_n} = 0, {J_m,F_n} = n F_{m+n-2}, {J_m,J_n} = (n-m) J_{m+n-2}
/// for 1 <= m,n <= max_index (2N-1 by default).
std::vector<Verdict> check_auxiliary_identities(int N, const CheckConfig& cfg, int max_index = 0);

/// Functional relations among F and K (Ktilde): the three-index relation
/// for 0 <= i <= j <= n <= N, the K_{a,0} relation for 1 <= a < b <= N,
/// and the reduced relation through G_m = K_{m+1,1} for 2 <= j < n <= N.
std::vector<Verdict> check_functional_relations(int N, Model model, const CheckConfig& cfg);

/// Ktilde by its trace definition against K + alpha sqrt(h) K^(1)_{m+1,n+1}.
std::vector<Verdict> check_ktilde_decomposition(int N, const CheckConfig& cfg);

/// Negative control: the table with K_{2,1} (or Ktilde) added to {F1,K21}.
BracketTable mutate_table(const BracketTable& table);

bool all_hold(const std::vector<Verdict>& v);

}  // namespace cmsym
