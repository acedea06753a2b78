#include "cmsym/algebra.hpp"

#include <sstream>

#include "cmsym/errors.hpp"
#include "cmsym/symfun.hpp"

namespace cmsym {

using json = nlohmann::ordered_json;

Var generator_var(const Observable& obs) {
  const auto& ix = obs.idx();
  switch (obs.kind()) {
    case ObsKind::F:
      return Var::F(ix[0]);
    case ObsKind::K:
      return {ix[1] == 0 ? VarKind::Kzero : VarKind::K, ix[0], ix[1]};
    case ObsKind::Ktilde:
      return {ix[1] == 0 ? VarKind::Ktzero : VarKind::Kt, ix[0], ix[1]};
    default:
      throw ArityError("observable " + obs.name() + " is not a generator");
  }
}

Observable generator_observable(const Var& v) {
  switch (v.kind) {
    case VarKind::F:
      return Observable::F(v.m);
    case VarKind::K:
    case VarKind::Kzero:
      return Observable::K(v.m, v.n);
    case VarKind::Kt:
    case VarKind::Ktzero:
      return Observable::Ktilde(v.m, v.n);
    case VarKind::S:
      break;
  }
  throw ArityError("s is not an observable");
}

std::vector<Var> generator_vars(int N, Model model) {
  std::vector<Var> out;
  for (const auto& o : generator_set(N, model).members) out.push_back(generator_var(o));
  return out;
}

namespace {

VarKind k_kind(Model model) { return model == Model::continuous ? VarKind::K : VarKind::Kt; }
VarKind k0_kind(Model model) { return model == Model::continuous ? VarKind::Kzero : VarKind::Ktzero; }

void check_generator(const Var& v, int N, Model model) {
  if (v.kind == VarKind::F) {
    if (v.m < 1 || v.m > N) throw ArityError("generator " + v.name() + " outside 1..N");
    return;
  }
  if (v.kind != k_kind(model)) throw ArityError("generator " + v.name() + " does not belong to the " +
                                                to_string(model) + " model");
  if (!(1 <= v.n && v.n < v.m && v.m <= N)) throw ArityError("generator " + v.name() + " outside 1 <= n < m <= N");
}

// Formal-alphabet helpers.
struct Formal {
  int N;
  Model model;

  PolyExpr F(int k) const {
    if (k < 0) throw StructuralError("negative F index in formal bracket");
    if (k == 0) return PolyExpr(GaussianRational(N));
    return PolyExpr(Var::F(k));
  }

  PolyExpr K(int m, int n) const {
    if (m < 0 || n < 0) throw StructuralError("negative K index in formal bracket");
    if (m == n) return PolyExpr();
    const int hi = std::max(m, n), lo = std::min(m, n);
    Var v = lo == 0 ? Var{k0_kind(model), hi, 0} : Var{k_kind(model), hi, lo};
    PolyExpr p(v);
    return m > n ? p : -p;
  }

  // The KK block with index shift d (d = 2 undeformed, d = 1 deformation).
  PolyExpr kk_block(int i, int j, int m, int n, int d) const {
    auto c = [](int v) { return PolyExpr(GaussianRational(v)); };
    PolyExpr r;
    r += F(i) * (c(m) * K(n, j + m - d) + c(n) * K(j + n - d, m));
    r += F(j) * (c(m) * K(i + m - d, n) + c(n) * K(m, i + n - d));
    r += F(m) * (c(i) * K(i + n - d, j) + c(j) * K(i, j + n - d));
    r += F(n) * (c(i) * K(j, i + m - d) + c(j) * K(j + m - d, i));
    return r;
  }

  PolyExpr fk(int i, int m, int n) const {
    const PolyExpr ci{GaussianRational(i)};
    PolyExpr r = ci * (F(m) * F(n + i - 2) - F(n) * F(m + i - 2));
    if (model == Model::discrete) {
      r += ci * PolyExpr::alpha_sqrt_h() * (F(m) * F(i + n - 1) - F(n) * F(i + m - 1));
    }
    return r;
  }

  PolyExpr kk(int i, int j, int m, int n) const {
    PolyExpr r = kk_block(i, j, m, n, 2);
    if (model == Model::discrete) r += PolyExpr::alpha_sqrt_h() * kk_block(i, j, m, n, 1);
    return r;
  }
};

}  // namespace

PolyExpr formal_bracket(const Var& a, const Var& b, int N, Model model) {
  check_generator(a, N, model);
  check_generator(b, N, model);
  Formal f{N, model};
  const bool aF = a.kind == VarKind::F, bF = b.kind == VarKind::F;
  if (aF && bF) return PolyExpr();
  if (aF) return f.fk(a.m, b.m, b.n);
  if (bF) return -f.fk(b.m, a.m, a.n);
  return f.kk(a.m, a.n, b.m, b.n);
}

PolyExpr eliminate_K0(const PolyExpr& expr, int N) {
  PolyExpr e = expr;
  for (;;) {
    // first term carrying an index-0 generator
    const Monomial* mono = nullptr;
    GaussianRational coef;
    Var z;
    for (const auto& [m, c] : e.terms()) {
      for (const auto& [id, ex] : m.factors()) {
        Var v = Var::from_id(id);
        if (!v.is_zero_index()) continue;
        if (ex != 1) throw StructuralError("K_{a,0} appears non-linearly in " + m.str());
        mono = &m;
        coef = c;
        z = v;
        break;
      }
      if (mono) break;
    }
    if (!mono) return e;

    const Monomial m = *mono;
    const int a = z.m;
    const Monomial rest = m.without(z);
    const VarKind k_var = z.kind == VarKind::Kzero ? VarKind::K : VarKind::Kt;
    bool paired = false;
    for (const auto& [id, ex] : rest.factors()) {
      Var fb = Var::from_id(id);
      if (fb.kind != VarKind::F || fb.m == a) continue;
      const int b = fb.m;
      const Monomial r = rest.without(fb);
      const Monomial partner = r * Monomial(Var::F(a)) * Monomial(Var{z.kind, b, 0});
      if (e.coefficient(partner).is_zero()) continue;
      // c r (F_b K_{a,0} - F_a K_{b,0}) -> c r N K_{a,b}
      e.add_term(m, -coef);
      e.add_term(partner, coef);
      const int hi = std::max(a, b), lo = std::min(a, b);
      GaussianRational kc = coef * GaussianRational(N) * GaussianRational(a > b ? 1 : -1);
      e.add_term(r * Monomial(Var{k_var, hi, lo}), kc);
      paired = true;
      break;
    }
    if (!paired) throw StructuralError("unpaired index-0 term " + m.str());
  }
}

// ---------------------------------------------------------------------------
// AlgebraContext

AlgebraContext::AlgebraContext(int N, Model model) : N_(N), model_(model), cache_limit_(2 * N + 1) {
  if (N < 1) throw ArityError("algebra needs N >= 1");
  std::vector<PolyExpr> f;
  for (int k = 1; k <= N; ++k) f.emplace_back(Var::F(k));
  c_ = symfun::trace_recurrence<PolyExpr>(f, N);
  F_.reserve(cache_limit_ + 1);
  for (int k = 0; k <= cache_limit_; ++k) F_.push_back(compute_F(k));
  for (int m = 2; m <= cache_limit_; ++m)
    for (int n = 1; n < m; ++n) K_.emplace(std::pair{m, n}, compute_K(m, n));
}

PolyExpr AlgebraContext::compute_F(int k) const {
  if (k == 0) return PolyExpr(GaussianRational(N_));
  if (k <= N_) return PolyExpr(Var::F(k));
  PolyExpr acc;
  for (int i = 1; i <= N_; ++i) acc += c_[i - 1] * reduce_F(k - i);
  return acc;
}

PolyExpr AlgebraContext::reduce_F(int k) const {
  if (k < 0) throw ArityError("reduce_F: negative index");
  if (k < static_cast<int>(F_.size())) return F_[k];
  return compute_F(k);
}

PolyExpr AlgebraContext::compute_K(int m, int n) const {
  if (m <= N_) return PolyExpr(Var{k_kind(model_), m, n});
  PolyExpr acc;
  for (int i = 1; i <= N_; ++i) acc += c_[i - 1] * reduce_K(m - i, n);
  return acc;
}

PolyExpr AlgebraContext::reduce_K(int m, int n) const {
  if (m < 1 || n < 1) throw ArityError("reduce_K: indices must be >= 1 (eliminate K_{a,0} first)");
  if (m == n) return PolyExpr();
  if (m < n) return -reduce_K(n, m);
  auto it = K_.find({m, n});
  if (it != K_.end()) return it->second;
  return compute_K(m, n);
}

PolyExpr AlgebraContext::reduce(const PolyExpr& expr) const {
  return expr.substitute([this](const Var& v) -> std::optional<PolyExpr> {
    switch (v.kind) {
      case VarKind::F:
        if (v.m > N_) return reduce_F(v.m);
        return std::nullopt;
      case VarKind::K:
      case VarKind::Kt:
        if (v.kind != k_kind(model_)) throw StructuralError("mixed K and Ktilde in " + to_string(model_) + " bracket");
        if (v.m > N_) return reduce_K(v.m, v.n);
        return std::nullopt;
      case VarKind::Kzero:
      case VarKind::Ktzero:
        throw StructuralError("K_{a,0} left for reduction: " + v.name());
      case VarKind::S:
        return std::nullopt;
    }
    return std::nullopt;
  });
}

PolyExpr AlgebraContext::closed_bracket(const Var& a, const Var& b) const {
  return reduce(eliminate_K0(formal_bracket(a, b, N_, model_), N_));
}

PolyExpr reduce_F(int k, int N) { return AlgebraContext(N, Model::continuous).reduce_F(k); }

PolyExpr reduce_K(int m, int n, int N, Model model) { return AlgebraContext(N, model).reduce_K(m, n); }

PolyExpr closed_bracket(const Var& a, const Var& b, int N, Model model) {
  return AlgebraContext(N, model).closed_bracket(a, b);
}

// ---------------------------------------------------------------------------
// Tables

const TableEntry* BracketTable::find(const Var& a, const Var& b) const {
  for (const auto& e : entries)
    if ((e.a == a && e.b == b) || (e.a == b && e.b == a)) return &e;
  return nullptr;
}

PolyExpr BracketTable::bracket(const Var& a, const Var& b) const {
  if (a == b) return PolyExpr();
  const TableEntry* e = find(a, b);
  if (!e) throw ArityError("no table entry for {" + a.name() + "," + b.name() + "}");
  return e->a == a ? e->value : -e->value;
}

void BracketTable::recompute_degrees() {
  degree = -1;
  graded_degree = -1;
  for (const auto& e : entries) {
    degree = std::max(degree, e.value.plain_degree());
    graded_degree = std::max(graded_degree, e.value.graded_degree());
  }
}

namespace {

BracketTable table_skeleton(int N, Model model) {
  if (N < 2) throw ArityError("tables need N >= 2");
  BracketTable t;
  t.N = N;
  t.model = model;
  t.generators = generator_vars(N, model);
  for (std::size_t i = 0; i < t.generators.size(); ++i)
    for (std::size_t j = i + 1; j < t.generators.size(); ++j) t.entries.push_back({t.generators[i], t.generators[j], {}});
  return t;
}

}  // namespace

BracketTable build_table(int N, Model model) {
  BracketTable t = table_skeleton(N, model);
  const AlgebraContext ctx(N, model);  // sequential warm-up
  const int count = static_cast<int>(t.entries.size());
  std::vector<std::string> errors(count);
#ifdef CMSYM_HAVE_OPENMP
#pragma omp parallel for schedule(dynamic, 1)
#endif
  for (int k = 0; k < count; ++k) {
    try {
      t.entries[k].value = ctx.closed_bracket(t.entries[k].a, t.entries[k].b);
    } catch (const std::exception& e) {
      errors[k] = e.what();
    }
  }
  for (int k = 0; k < count; ++k)
    if (!errors[k].empty()) throw StructuralError(t.entries[k].key() + ": " + errors[k]);
  t.recompute_degrees();
  return t;
}

BracketTable build_table_serial(int N, Model model) {
  BracketTable t = table_skeleton(N, model);
  const AlgebraContext ctx(N, model);
  for (auto& e : t.entries) e.value = ctx.closed_bracket(e.a, e.b);
  t.recompute_degrees();
  return t;
}

bool ideal_check(const BracketTable& table) {
  for (const auto& e : table.entries) {
    if (e.a.kind != VarKind::F && e.b.kind != VarKind::F) continue;
    for (const auto& [m, c] : e.value.terms()) {
      bool has_F = false;
      for (const auto& [id, ex] : m.factors()) has_F = has_F || Var::from_id(id).kind == VarKind::F;
      if (!has_F) return false;
    }
  }
  return true;
}

BracketTable contract_to_continuous(const BracketTable& d) {
  BracketTable t;
  t.N = d.N;
  t.model = Model::continuous;
  auto untilde = [](const Var& v) { return v.kind == VarKind::Kt ? Var{VarKind::K, v.m, v.n} : v; };
  for (const auto& g : d.generators) t.generators.push_back(untilde(g));
  for (const auto& e : d.entries) t.entries.push_back({untilde(e.a), untilde(e.b), e.value.truncate_s().untilde()});
  t.recompute_degrees();
  return t;
}

std::vector<std::string> compare_tables(const BracketTable& a, const BracketTable& b) {
  std::vector<std::string> diff;
  for (const auto& e : a.entries) {
    const TableEntry* o = b.find(e.a, e.b);
    if (!o) {
      diff.push_back(e.key());
      continue;
    }
    PolyExpr ov = o->a == e.a ? o->value : -o->value;
    if (!(ov == e.value)) diff.push_back(e.key());
  }
  if (a.entries.size() != b.entries.size()) diff.push_back("<entry count>");
  return diff;
}

json poly_to_json(const PolyExpr& p) {
  json arr = json::array();
  for (const auto& [m, c] : p.terms()) {
    json exps = json::object();
    for (const auto& [id, e] : m.factors()) exps[Var::from_id(id).name()] = e;
    arr.push_back({{"coefficient", c.str()}, {"exponents", exps}});
  }
  return arr;
}

namespace {

Var var_from_name(const std::string& name) {
  PolyExpr p = PolyExpr::parse(name);
  if (p.size() != 1) throw ParseError("'" + name + "' is not a single generator");
  const auto& [m, c] = *p.terms().begin();
  if (!(c == GaussianRational(1)) || m.factors().size() != 1 || m.factors()[0].second != 1) {
    throw ParseError("'" + name + "' is not a normalized generator name");
  }
  return Var::from_id(m.factors()[0].first);
}

}  // namespace

PolyExpr poly_from_json(const json& j) {
  PolyExpr out;
  for (const auto& term : j) {
    Monomial m;
    for (const auto& [name, e] : term.at("exponents").items()) m = m * Monomial(var_from_name(name), e.get<int>());
    out.add_term(m, GaussianRational::parse(term.at("coefficient").get<std::string>()));
  }
  return out;
}

json table_to_json(const BracketTable& t) {
  json j;
  j["schema"] = "cmsym-table/1";
  j["naming"] = kNamingConvention;
  j["N"] = t.N;
  j["mode"] = to_string(t.model);
  j["degree"] = t.degree;
  j["graded_degree"] = t.graded_degree;
  j["alpha_sqrt_h"] = "(1+i)*s";
  json gens = json::array();
  for (const auto& g : t.generators) gens.push_back(g.name());
  j["generators"] = gens;
  json entries = json::object();
  for (const auto& e : t.entries) entries[e.key()] = poly_to_json(e.value);
  j["entries"] = entries;
  return j;
}

BracketTable table_from_json(const json& j) {
  BracketTable t;
  t.N = j.at("N").get<int>();
  t.model = parse_model(j.at("mode").get<std::string>());
  for (const auto& g : j.at("generators")) t.generators.push_back(var_from_name(g.get<std::string>()));
  for (const auto& [key, value] : j.at("entries").items()) {
    auto bar = key.find('|');
    if (bar == std::string::npos) throw ParseError("bad entry key '" + key + "'");
    t.entries.push_back({var_from_name(key.substr(0, bar)), var_from_name(key.substr(bar + 1)), poly_from_json(value)});
  }
  t.recompute_degrees();
  return t;
}

std::string table_to_text(const BracketTable& t, bool include_zero) {
  std::vector<std::pair<std::string, std::string>> rows;
  std::size_t width = 0;
  for (const auto& e : t.entries) {
    if (!include_zero && e.value.is_zero()) continue;
    std::string lhs = "{" + e.a.name() + "," + e.b.name() + "}";
    width = std::max(width, lhs.size());
    rows.emplace_back(std::move(lhs), e.value.str());
  }
  std::ostringstream os;
  os << "# N=" << t.N << " " << to_string(t.model) << " degree=" << t.degree << " graded_degree=" << t.graded_degree;
  if (t.model == Model::discrete) os << " alpha_sqrt_h=(1+i)*s";
  os << "\n";
  for (const auto& [lhs, rhs] : rows) os << lhs << std::string(width - lhs.size(), ' ') << " = " << rhs << "\n";
  return os.str();
}

}  // namespace cmsym
