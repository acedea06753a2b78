#pragma once

// Sparse polynomials over Q(i) in the abstract generators F_k, K_{m,n},
// Ktilde_{m,n}, the index-0 families K_{a,0}, Ktilde_{a,0}, and the central
// symbol s (alpha*sqrt(h) is carried as (1+i)s).

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cmsym/gaussian_rational.hpp"
#include "cmsym/scalar.hpp"
#include "cmsym/symfun.hpp"

namespace cmsym {

enum class VarKind : std::uint8_t { F = 0, K = 1, Kt = 2, Kzero = 3, Ktzero = 4, S = 5 };

/// A generator symbol. K-type variables are always stored with m > n; the
/// index-0 kinds keep their first index in m.
struct Var {
  VarKind kind = VarKind::F;
  int m = 0;
  int n = 0;

  static Var F(int k) { return {VarKind::F, k, 0}; }
  static Var S() { return {VarKind::S, 0, 0}; }

  std::uint32_t id() const {
    return (static_cast<std::uint32_t>(kind) << 24) | (static_cast<std::uint32_t>(m) << 12) |
           static_cast<std::uint32_t>(n);
  }
  static Var from_id(std::uint32_t id) {
    return {static_cast<VarKind>(id >> 24), static_cast<int>((id >> 12) & 0xfff), static_cast<int>(id & 0xfff)};
  }

  bool is_K_like() const { return kind == VarKind::K || kind == VarKind::Kt; }
  bool is_zero_index() const { return kind == VarKind::Kzero || kind == VarKind::Ktzero; }

  /// "F3", "K31", "Kt32", "K30" (K_{3,0}), "Kt10_2", "s".
  std::string name() const;

  /// Plain degree contribution (1 for every generator, 0 for s).
  int plain_weight() const { return kind == VarKind::S ? 0 : 1; }
  /// Graded weight: F_k -> k, K_{m,n} -> m+n-1, Ktilde_{m,n} -> m+n, s -> 0.
  int graded_weight() const;

  friend bool operator==(const Var& a, const Var& b) { return a.id() == b.id(); }
  friend bool operator<(const Var& a, const Var& b) { return a.id() < b.id(); }
};

/// Product of variable powers, kept sorted by variable id.
class Monomial {
 public:
  using Factor = std::pair<std::uint32_t, int>;

  Monomial() = default;
  explicit Monomial(const Var& v, int e = 1) {
    if (e != 0) f_.emplace_back(v.id(), e);
  }

  const std::vector<Factor>& factors() const { return f_; }
  bool is_one() const { return f_.empty(); }

  int exponent(const Var& v) const;
  int plain_degree() const;
  int graded_degree() const;

  /// The monomial with v's exponent lowered by e (requires divisibility).
  Monomial without(const Var& v, int e = 1) const;

  friend Monomial operator*(const Monomial& a, const Monomial& b);
  friend bool operator==(const Monomial& a, const Monomial& b) { return a.f_ == b.f_; }

  std::string str() const;  // "F1^2 K31", "1" for the empty product

 private:
  std::vector<Factor> f_;
};

/// Total order used for storage and rendering: higher plain degree first,
/// then lexicographic in the variable order F_1 < F_2 < ... < K_{2,1} < ...
struct MonomialOrder {
  bool operator()(const Monomial& a, const Monomial& b) const;
};

class PolyExpr {
 public:
  using Terms = std::map<Monomial, GaussianRational, MonomialOrder>;

  PolyExpr() = default;
  PolyExpr(const GaussianRational& c);  // NOLINT(google-explicit-constructor)
  template <std::integral I>
  PolyExpr(I c) : PolyExpr(GaussianRational(c)) {}  // NOLINT
  explicit PolyExpr(const Var& v, int e = 1);
  PolyExpr(const Monomial& m, const GaussianRational& c);

  static PolyExpr var(const Var& v) { return PolyExpr(v); }
  /// alpha*sqrt(h) = (1+i) s.
  static PolyExpr alpha_sqrt_h();

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  GaussianRational coefficient(const Monomial& m) const;

  PolyExpr& operator+=(const PolyExpr& o);
  PolyExpr& operator-=(const PolyExpr& o);
  PolyExpr& operator*=(const PolyExpr& o);
  PolyExpr& operator*=(const GaussianRational& c);

  friend PolyExpr operator+(PolyExpr a, const PolyExpr& b) { return a += b; }
  friend PolyExpr operator-(PolyExpr a, const PolyExpr& b) { return a -= b; }
  friend PolyExpr operator*(const PolyExpr& a, const PolyExpr& b);
  friend PolyExpr operator*(PolyExpr a, const GaussianRational& c) { return a *= c; }
  friend PolyExpr operator*(const GaussianRational& c, PolyExpr a) { return a *= c; }
  template <std::integral I>
  friend PolyExpr operator*(I c, PolyExpr a) {
    return a *= GaussianRational(c);
  }
  template <std::integral I>
  friend PolyExpr operator*(PolyExpr a, I c) {
    return a *= GaussianRational(c);
  }
  PolyExpr operator-() const;
  PolyExpr pow(int e) const;

  friend bool operator==(const PolyExpr& a, const PolyExpr& b) { return a.terms_ == b.terms_; }

  /// Add c * m in place.
  void add_term(const Monomial& m, const GaussianRational& c);

  /// Maximum plain degree (generators count 1, s counts 0); -1 for zero.
  int plain_degree() const;
  /// Maximum graded degree; -1 for zero.
  int graded_degree() const;
  /// Highest power of s present.
  int s_degree() const;

  bool mentions(const std::function<bool(const Var&)>& pred) const;
  std::vector<Var> variables() const;

  /// Replace variables: `sub` returns the replacement or nullopt to keep the variable.
  PolyExpr substitute(const std::function<std::optional<PolyExpr>(const Var&)>& sub) const;
  /// Terms of exact s-degree k, with s^k divided out.
  PolyExpr s_part(int k) const;
  /// Set s = 0.
  PolyExpr truncate_s() const { return s_part(0); }
  /// Rename every Ktilde-type variable to its K counterpart.
  PolyExpr untilde() const;

  /// Evaluate with `value(var)` supplying every variable.
  template <class T>
  T evaluate(const std::function<T(const Var&)>& value) const {
    T total = zero<T>();
    std::map<std::uint32_t, T> cache;
    for (const auto& [mono, coef] : terms_) {
      T term = lift<T>(convert<base_t<T>>(coef));
      for (const auto& [id, e] : mono.factors()) {
        auto it = cache.find(id);
        if (it == cache.end()) it = cache.emplace(id, value(Var::from_id(id))).first;
        for (int k = 0; k < e; ++k) term = term * it->second;
      }
      total += term;
    }
    return total;
  }

  /// Text form, e.g. "5 F1 K32 - 4 F2 K31 + 3 F3 K21". Terms with
  /// s^k are grouped as "alpha_sqrt_h^k*(...)" when group_alpha is set.
  std::string str(bool group_alpha = true) const;

  /// Parse the text format (also accepts '*', '^', '/', parentheses, i, s, a).
  static PolyExpr parse(const std::string& text);

 private:
  Terms terms_;
};

std::ostream& operator<<(std::ostream& os, const PolyExpr& p);

/// Symbolic ring constants for the symmetric-function kernel.
template <>
struct ring_traits<PolyExpr> {
  static PolyExpr constant(const Rational& q) { return PolyExpr(GaussianRational(q)); }
};

}  // namespace cmsym
