#pragma once

// Closed polynomial symmetry algebras: formal brackets over the extended
// alphabet, elimination of K_{a,0}, Cayley-Hamilton closures, and tables.

#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cmsym/observables.hpp"
#include "cmsym/polyexpr.hpp"

namespace cmsym {

/// Generator variable of the model: F_k, or K_{m,n} / Ktilde_{m,n}.
Var generator_var(const Observable& obs);
Observable generator_observable(const Var& v);

/// F_1..F_N, then K_{m,n} (Ktilde in the discrete model) ordered by (m, n).
std::vector<Var> generator_vars(int N, Model model);

/// Formal right-hand side of {a, b}; may contain F_k with k > N, K with
/// indices above N and K_{a,0}. F_0 is replaced by the constant N.
PolyExpr formal_bracket(const Var& a, const Var& b, int N, Model model);

/// Rewrite every pair F_b K_{a,0} - F_a K_{b,0} as N K_{a,b}. Throws
/// StructuralError on an unpaired K_{a,0} term.
PolyExpr eliminate_K0(const PolyExpr& expr, int N);

/// Memoized Cayley-Hamilton closures for one (N, model). All reductions
/// needed by the bracket tables are computed in the constructor, after which
/// the context is read-only and may be shared between threads.
class AlgebraContext {
 public:
  AlgebraContext(int N, Model model);

  int N() const { return N_; }
  Model model() const { return model_; }

  /// F_k through F_1..F_N (F_0 = N, F_k for k <= N is the generator).
  PolyExpr reduce_F(int k) const;
  /// K_{m,n} (Ktilde in the discrete model) through in-range generators.
  PolyExpr reduce_K(int m, int n) const;
  /// Substitute every out-of-range F and K in expr.
  PolyExpr reduce(const PolyExpr& expr) const;

  /// formal_bracket -> eliminate_K0 -> reduce.
  PolyExpr closed_bracket(const Var& a, const Var& b) const;

  /// Coefficients c_1..c_N of F_{N+s} = sum_k c_k F_{N+s-k}.
  const std::vector<PolyExpr>& recurrence() const { return c_; }

 private:
  PolyExpr compute_F(int k) const;
  PolyExpr compute_K(int m, int n) const;

  int N_;
  Model model_;
  int cache_limit_;
  std::vector<PolyExpr> c_;
  std::vector<PolyExpr> F_;                      // F_[k] for k <= cache_limit_
  std::map<std::pair<int, int>, PolyExpr> K_;  // m > n >= 1, m <= cache_limit_
};

PolyExpr reduce_F(int k, int N);
PolyExpr reduce_K(int m, int n, int N, Model model);
PolyExpr closed_bracket(const Var& a, const Var& b, int N, Model model);

struct TableEntry {
  Var a;
  Var b;
  PolyExpr value;
  std::string key() const { return a.name() + "|" + b.name(); }
};

struct BracketTable {
  int N = 0;
  Model model = Model::continuous;
  std::vector<Var> generators;
  std::vector<TableEntry> entries;  // all pairs a < b in generator order
  int degree = -1;                  // plain polynomial degree in the generators
  int graded_degree = -1;           // deg F_k = k, deg K_{m,n} = m+n-1, deg Kt_{m,n} = m+n

  const TableEntry* find(const Var& a, const Var& b) const;
  /// {a, b} with antisymmetry applied when the pair is stored reversed.
  PolyExpr bracket(const Var& a, const Var& b) const;
  void recompute_degrees();
};

/// Parallel over generator pairs after a sequential warm-up.
BracketTable build_table(int N, Model model);
/// Serial reference of build_table.
BracketTable build_table_serial(int N, Model model);

/// Every {F_i, .} entry lies in the span of monomials containing an F generator.
bool ideal_check(const BracketTable& table);

/// Discrete table with s = 0 and Ktilde renamed to K.
BracketTable contract_to_continuous(const BracketTable& discrete);

/// Entry-by-entry equality; returns the keys that differ.
std::vector<std::string> compare_tables(const BracketTable& a, const BracketTable& b);

nlohmann::ordered_json table_to_json(const BracketTable& t);
BracketTable table_from_json(const nlohmann::ordered_json& j);
nlohmann::ordered_json poly_to_json(const PolyExpr& p);
PolyExpr poly_from_json(const nlohmann::ordered_json& j);

/// Aligned text, one relation per line: "{K21,K32} = 5 F1 K32 - 4 F2 K31 + 3 F3 K21".
std::string table_to_text(const BracketTable& t, bool include_zero = true);

}  // namespace cmsym
