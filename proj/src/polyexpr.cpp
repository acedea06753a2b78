#include "cmsym/polyexpr.hpp"

#include <cctype>
#include <ostream>
#include <regex>
#include <sstream>

#include "cmsym/errors.hpp"
#include "cmsym/observables.hpp"

namespace cmsym {

// ---------------------------------------------------------------------------
// Var

std::string Var::name() const {
  switch (kind) {
    case VarKind::F:
      return "F" + std::to_string(m);
    case VarKind::K:
      return "K" + pair_suffix(m, n);
    case VarKind::Kt:
      return "Kt" + pair_suffix(m, n);
    case VarKind::Kzero:
      return "K" + pair_suffix(m, 0);
    case VarKind::Ktzero:
      return "Kt" + pair_suffix(m, 0);
    case VarKind::S:
      return "s";
  }
  return "?";
}

int Var::graded_weight() const {
  switch (kind) {
    case VarKind::F:
      return m;
    case VarKind::K:
    case VarKind::Kzero:
      return m + n - 1;
    case VarKind::Kt:
    case VarKind::Ktzero:
      return m + n;
    case VarKind::S:
      return 0;
  }
  return 0;
}

// ---------------------------------------------------------------------------
// Monomial

int Monomial::exponent(const Var& v) const {
  const auto id = v.id();
  for (const auto& [vid, e] : f_)
    if (vid == id) return e;
  return 0;
}

int Monomial::plain_degree() const {
  int d = 0;
  for (const auto& [id, e] : f_) d += Var::from_id(id).plain_weight() * e;
  return d;
}

int Monomial::graded_degree() const {
  int d = 0;
  for (const auto& [id, e] : f_) d += Var::from_id(id).graded_weight() * e;
  return d;
}

Monomial Monomial::without(const Var& v, int e) const {
  Monomial out;
  const auto id = v.id();
  bool found = false;
  for (const auto& [vid, ex] : f_) {
    if (vid == id) {
      found = true;
      if (ex < e) break;
      if (ex > e) out.f_.emplace_back(vid, ex - e);
    } else {
      out.f_.emplace_back(vid, ex);
    }
  }
  if (!found || exponent(v) < e) throw StructuralError("monomial not divisible by " + v.name());
  return out;
}

Monomial operator*(const Monomial& a, const Monomial& b) {
  Monomial out;
  out.f_.reserve(a.f_.size() + b.f_.size());
  std::size_t i = 0, j = 0;
  while (i < a.f_.size() || j < b.f_.size()) {
    if (j == b.f_.size() || (i < a.f_.size() && a.f_[i].first < b.f_[j].first)) {
      out.f_.push_back(a.f_[i++]);
    } else if (i == a.f_.size() || b.f_[j].first < a.f_[i].first) {
      out.f_.push_back(b.f_[j++]);
    } else {
      out.f_.emplace_back(a.f_[i].first, a.f_[i].second + b.f_[j].second);
      ++i;
      ++j;
    }
  }
  return out;
}

std::string Monomial::str() const {
  if (f_.empty()) return "1";
  std::string out;
  for (const auto& [id, e] : f_) {
    if (!out.empty()) out += ' ';
    out += Var::from_id(id).name();
    if (e != 1) out += "^" + std::to_string(e);
  }
  return out;
}

bool MonomialOrder::operator()(const Monomial& a, const Monomial& b) const {
  const int da = a.plain_degree();
  const int db = b.plain_degree();
  if (da != db) return da > db;
  const auto& fa = a.factors();
  const auto& fb = b.factors();
  const std::size_t n = std::min(fa.size(), fb.size());
  for (std::size_t k = 0; k < n; ++k) {
    if (fa[k].first != fb[k].first) return fa[k].first < fb[k].first;
    if (fa[k].second != fb[k].second) return fa[k].second > fb[k].second;
  }
  return fa.size() < fb.size();
}

// ---------------------------------------------------------------------------
// PolyExpr

PolyExpr::PolyExpr(const GaussianRational& c) {
  if (!c.is_zero()) terms_.emplace(Monomial(), c);
}

PolyExpr::PolyExpr(const Var& v, int e) { terms_.emplace(Monomial(v, e), GaussianRational(1)); }

PolyExpr::PolyExpr(const Monomial& m, const GaussianRational& c) {
  if (!c.is_zero()) terms_.emplace(m, c);
}

PolyExpr PolyExpr::alpha_sqrt_h() {
  return PolyExpr(Monomial(Var::S()), GaussianRational(Rational(1), Rational(1)));
}

GaussianRational PolyExpr::coefficient(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? GaussianRational(0) : it->second;
}

void PolyExpr::add_term(const Monomial& m, const GaussianRational& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

PolyExpr& PolyExpr::operator+=(const PolyExpr& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

PolyExpr& PolyExpr::operator-=(const PolyExpr& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

PolyExpr operator*(const PolyExpr& a, const PolyExpr& b) {
  PolyExpr out;
  for (const auto& [ma, ca] : a.terms_)
    for (const auto& [mb, cb] : b.terms_) out.add_term(ma * mb, ca * cb);
  return out;
}

PolyExpr& PolyExpr::operator*=(const PolyExpr& o) { return *this = *this * o; }

PolyExpr& PolyExpr::operator*=(const GaussianRational& c) {
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, coef] : terms_) coef *= c;
  return *this;
}

PolyExpr PolyExpr::operator-() const {
  PolyExpr out = *this;
  for (auto& [m, c] : out.terms_) c = -c;
  return out;
}

PolyExpr PolyExpr::pow(int e) const {
  if (e < 0) throw DomainError("negative power of a polynomial");
  PolyExpr out(GaussianRational(1));
  for (int k = 0; k < e; ++k) out *= *this;
  return out;
}

int PolyExpr::plain_degree() const {
  int d = -1;
  for (const auto& [m, c] : terms_) d = std::max(d, m.plain_degree());
  return d;
}

int PolyExpr::graded_degree() const {
  int d = -1;
  for (const auto& [m, c] : terms_) d = std::max(d, m.graded_degree());
  return d;
}

int PolyExpr::s_degree() const {
  int d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, m.exponent(Var::S()));
  return d;
}

bool PolyExpr::mentions(const std::function<bool(const Var&)>& pred) const {
  for (const auto& [m, c] : terms_)
    for (const auto& [id, e] : m.factors())
      if (pred(Var::from_id(id))) return true;
  return false;
}

std::vector<Var> PolyExpr::variables() const {
  std::map<std::uint32_t, bool> seen;
  for (const auto& [m, c] : terms_)
    for (const auto& [id, e] : m.factors()) seen[id] = true;
  std::vector<Var> out;
  for (const auto& [id, b] : seen) out.push_back(Var::from_id(id));
  return out;
}

PolyExpr PolyExpr::substitute(const std::function<std::optional<PolyExpr>(const Var&)>& sub) const {
  std::map<std::uint32_t, std::optional<PolyExpr>> cache;
  PolyExpr out;
  for (const auto& [m, c] : terms_) {
    Monomial kept;
    PolyExpr factor(c);
    for (const auto& [id, e] : m.factors()) {
      auto it = cache.find(id);
      if (it == cache.end()) it = cache.emplace(id, sub(Var::from_id(id))).first;
      if (it->second) {
        for (int k = 0; k < e; ++k) factor = factor * *it->second;
      } else {
        kept = kept * Monomial(Var::from_id(id), e);
      }
    }
    for (const auto& [fm, fc] : factor.terms_) out.add_term(fm * kept, fc);
  }
  return out;
}

PolyExpr PolyExpr::s_part(int k) const {
  PolyExpr out;
  for (const auto& [m, c] : terms_) {
    const int e = m.exponent(Var::S());
    if (e != k) continue;
    out.add_term(k == 0 ? m : m.without(Var::S(), k), c);
  }
  return out;
}

PolyExpr PolyExpr::untilde() const {
  return substitute([](const Var& v) -> std::optional<PolyExpr> {
    if (v.kind == VarKind::Kt) return PolyExpr(Var{VarKind::K, v.m, v.n});
    if (v.kind == VarKind::Ktzero) return PolyExpr(Var{VarKind::Kzero, v.m, v.n});
    return std::nullopt;
  });
}

namespace {

std::string render_flat(const PolyExpr& p) {
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [m, c] : p.terms()) {
    std::string coef;
    bool negative = false;
    if (c.is_real()) {
      negative = sgn(c.re()) < 0;
      Rational mag = negative ? Rational(-c.re()) : c.re();
      if (mag != 1 || m.is_one()) coef = rational_str(mag);
    } else if (sgn(c.re()) == 0) {
      negative = sgn(c.im()) < 0;
      Rational mag = negative ? Rational(-c.im()) : c.im();
      coef = (mag == 1 ? std::string() : rational_str(mag) + "*") + "i";
    } else {
      coef = "(" + c.str() + ")";
    }
    if (first) {
      if (negative) out += "-";
    } else {
      out += negative ? " - " : " + ";
    }
    out += coef;
    if (!m.is_one()) {
      if (!coef.empty()) out += ' ';
      out += m.str();
    }
    first = false;
  }
  return out;
}

}  // namespace

std::string PolyExpr::str(bool group_alpha) const {
  if (!group_alpha || s_degree() == 0) return render_flat(*this);
  std::string out;
  const GaussianRational one_plus_i(Rational(1), Rational(1));
  for (int k = 0; k <= s_degree(); ++k) {
    PolyExpr part = s_part(k);
    if (part.is_zero()) continue;
    if (k == 0) {
      out = render_flat(part);
      continue;
    }
    part *= one_plus_i.pow(-k);
    if (!out.empty()) out += " + ";
    out += "alpha_sqrt_h";
    if (k > 1) out += "^" + std::to_string(k);
    out += "*(" + render_flat(part) + ")";
  }
  return out;
}

std::ostream& operator<<(std::ostream& os, const PolyExpr& p) { return os << p.str(); }

// ---------------------------------------------------------------------------
// Parser

namespace {

class Parser {
 public:
  explicit Parser(const std::string& text) : s_(text) {}

  PolyExpr parse() {
    PolyExpr e = expr();
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected trailing input");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("polynomial parse error at position " + std::to_string(pos_) + ": " + what + " in '" +
                     s_ + "'");
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  char peek() {
    skip_ws();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }

  bool starts_atom() {
    char c = peek();
    return std::isalnum(static_cast<unsigned char>(c)) || c == '(' || c == '_';
  }

  PolyExpr expr() {
    PolyExpr acc;
    bool first = true;
    for (;;) {
      char c = peek();
      int sign = 1;
      if (c == '+' || c == '-') {
        sign = (c == '-') ? -1 : 1;
        ++pos_;
      } else if (!first) {
        break;
      }
      PolyExpr t = term();
      acc += sign < 0 ? -t : t;
      first = false;
    }
    return acc;
  }

  PolyExpr term() {
    PolyExpr acc = power();
    for (;;) {
      char c = peek();
      if (c == '*') {
        ++pos_;
        acc *= power();
      } else if (c == '/') {
        ++pos_;
        PolyExpr d = power();
        if (d.size() != 1 || !d.terms().begin()->first.is_one()) fail("division by a non-constant");
        acc *= d.terms().begin()->second.inverse();
      } else if (starts_atom()) {
        acc *= power();
      } else {
        return acc;
      }
    }
  }

  PolyExpr power() {
    PolyExpr base = atom();
    if (peek() == '^') {
      ++pos_;
      skip_ws();
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) fail("expected integer exponent");
      base = base.pow(std::stoi(s_.substr(start, pos_ - start)));
    }
    return base;
  }

  PolyExpr atom() {
    char c = peek();
    if (c == '(') {
      ++pos_;
      PolyExpr e = expr();
      if (peek() != ')') fail("expected ')'");
      ++pos_;
      return e;
    }
    if (c == '-') {
      ++pos_;
      return -atom();
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      return PolyExpr(GaussianRational(Rational(mpz_class(s_.substr(start, pos_ - start)))));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
        ++pos_;
      return identifier(s_.substr(start, pos_ - start));
    }
    fail(c == '\0' ? "unexpected end of input" : std::string("unexpected '") + c + "'");
  }

  PolyExpr identifier(const std::string& id) {
    static const std::regex f_re(R"(F(\d+))");
    static const std::regex k_re(R"((K|Kt)(?:(\d)(\d)|(\d+)_(\d+)))");
    std::smatch m;
    if (id == "i") return PolyExpr(GaussianRational::i());
    if (id == "s") return PolyExpr(Var::S());
    if (id == "a" || id == "alpha_sqrt_h") return PolyExpr::alpha_sqrt_h();
    if (std::regex_match(id, m, f_re)) {
      int k = std::stoi(m[1]);
      if (k < 1) fail("F0 is the constant N; write the number instead");
      return PolyExpr(Var::F(k));
    }
    if (std::regex_match(id, m, k_re)) {
      int a = m[2].matched ? std::stoi(m[2]) : std::stoi(m[4]);
      int b = m[2].matched ? std::stoi(m[3]) : std::stoi(m[5]);
      const bool tilde = m[1] == "Kt";
      if (a == b) return PolyExpr();
      int sign = a > b ? 1 : -1;
      int hi = std::max(a, b), lo = std::min(a, b);
      Var v = lo == 0 ? Var{tilde ? VarKind::Ktzero : VarKind::Kzero, hi, 0}
                      : Var{tilde ? VarKind::Kt : VarKind::K, hi, lo};
      PolyExpr p(v);
      return sign > 0 ? p : -p;
    }
    fail("unknown identifier '" + id + "'");
  }

  std::string s_;
  std::size_t pos_ = 0;
};

}  // namespace

PolyExpr PolyExpr::parse(const std::string& text) { return Parser(text).parse(); }

}  // namespace cmsym
