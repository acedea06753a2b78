#include "cmsym/observables.hpp"

#include <regex>

namespace cmsym {

std::string to_string(Model m) { return m == Model::continuous ? "continuous" : "discrete"; }

Model parse_model(const std::string& s) {
  if (s == "continuous") return Model::continuous;
  if (s == "discrete") return Model::discrete;
  throw ParseError("unknown model '" + s + "' (expected continuous or discrete)");
}

std::string pair_suffix(int m, int n) {
  if (m >= 10 || n >= 10) return std::to_string(m) + "_" + std::to_string(n);
  return std::to_string(m) + std::to_string(n);
}

namespace {

void require_nonneg(int v, const char* what) {
  if (v < 0) throw ArityError(std::string(what) + " index must be non-negative");
}

}  // namespace

Observable Observable::zero() { return Observable(); }

Observable Observable::F(int k) {
  require_nonneg(k, "F");
  Observable o;
  o.kind_ = ObsKind::F;
  o.idx_ = {k, 0, 0};
  return o;
}

Observable Observable::J(int k) {
  require_nonneg(k, "J");
  Observable o;
  o.kind_ = ObsKind::J;
  o.idx_ = {k, 0, 0};
  return o;
}

Observable Observable::K(int m, int n) {
  require_nonneg(m, "K");
  require_nonneg(n, "K");
  if (m == n) return zero();
  Observable o;
  o.kind_ = ObsKind::K;
  o.idx_ = {std::max(m, n), std::min(m, n), 0};
  o.sign_ = m > n ? 1 : -1;
  return o;
}

Observable Observable::Ktilde(int m, int n) {
  Observable o = K(m, n);
  if (o.kind_ == ObsKind::K) o.kind_ = ObsKind::Ktilde;
  return o;
}

Observable Observable::Kflow(int a, int m, int n) {
  require_nonneg(m, "Kflow");
  require_nonneg(n, "Kflow");
  if (m == n) return zero();
  Observable o;
  o.kind_ = ObsKind::Kflow;
  o.idx_ = {a, std::max(m, n), std::min(m, n)};
  o.sign_ = m > n ? 1 : -1;
  return o;
}

Observable Observable::x(int i) {
  Observable o;
  o.kind_ = ObsKind::coord;
  o.idx_ = {0, i, 0};
  return o;
}

Observable Observable::p(int i) {
  Observable o;
  o.kind_ = ObsKind::coord;
  o.idx_ = {1, i, 0};
  return o;
}

Observable Observable::product(const Observable& f, const Observable& g) {
  Observable o;
  o.kind_ = ObsKind::product;
  o.factors_ = std::make_shared<const std::array<Observable, 2>>(std::array<Observable, 2>{f, g});
  return o;
}

std::string Observable::name() const {
  std::string body;
  switch (kind_) {
    case ObsKind::zero:
      return "0";
    case ObsKind::F:
      body = "F" + std::to_string(idx_[0]);
      break;
    case ObsKind::J:
      body = "J" + std::to_string(idx_[0]);
      break;
    case ObsKind::K:
      body = "K" + pair_suffix(idx_[0], idx_[1]);
      break;
    case ObsKind::Ktilde:
      body = "Kt" + pair_suffix(idx_[0], idx_[1]);
      break;
    case ObsKind::Kflow:
      body = "Kf" + std::to_string(idx_[0]) + "_" + pair_suffix(idx_[1], idx_[2]);
      break;
    case ObsKind::coord:
      body = (idx_[0] == 0 ? "x" : "p") + std::to_string(idx_[1]);
      break;
    case ObsKind::product:
      body = "(" + (*factors_)[0].name() + "*" + (*factors_)[1].name() + ")";
      break;
  }
  return sign_ < 0 ? "-" + body : body;
}

Observable Observable::parse(const std::string& text) {
  static const std::regex single(R"((-?)(F|J|x|p)(\d+))");
  static const std::regex pair(R"((-?)(K|Kt)(?:(\d)(\d)|(\d+)_(\d+)))");
  static const std::regex flow(R"((-?)Kf(\d+)_(?:(\d)(\d)|(\d+)_(\d+)))");
  std::smatch m;
  Observable o;
  auto pick = [&](int first) {
    if (m[first].matched) return std::pair{std::stoi(m[first]), std::stoi(m[first + 1])};
    return std::pair{std::stoi(m[first + 2]), std::stoi(m[first + 3])};
  };
  if (text == "0") return zero();
  if (std::regex_match(text, m, single)) {
    int k = std::stoi(m[3]);
    const std::string kind = m[2];
    if (kind == "F") o = F(k);
    else if (kind == "J") o = J(k);
    else if (kind == "x") o = x(k);
    else o = p(k);
  } else if (std::regex_match(text, m, pair)) {
    auto [a, b] = pick(3);
    o = (m[2] == "K") ? K(a, b) : Ktilde(a, b);
  } else if (std::regex_match(text, m, flow)) {
    auto [a, b] = pick(3);
    o = Kflow(std::stoi(m[2]), a, b);
  } else {
    throw ParseError("cannot parse observable name '" + text + "'");
  }
  return m[1].length() ? -o : o;
}

bool operator==(const Observable& a, const Observable& b) {
  if (a.kind_ != b.kind_ || a.sign_ != b.sign_ || a.idx_ != b.idx_) return false;
  if (a.kind_ != ObsKind::product) return true;
  return (*a.factors_)[0] == (*b.factors_)[0] && (*a.factors_)[1] == (*b.factors_)[1];
}

GeneratorSet generator_set(int N, Model model) {
  if (N < 1) throw ArityError("generator set needs N >= 1");
  GeneratorSet g;
  g.N = N;
  g.model = model;
  for (int k = 1; k <= N; ++k) g.members.push_back(Observable::F(k));
  for (int m = 2; m <= N; ++m)
    for (int n = 1; n < m; ++n) g.members.push_back(Observable::K(model, m, n));
  for (int k = 1; k <= N; ++k) g.fi_subset.push_back(Observable::F(k));
  for (int m = 1; m < N; ++m) g.fi_subset.push_back(Observable::K(model, m + 1, 1));
  return g;
}

int momentum_order(const Observable& obs, const PhasePoint<GaussianRational>& pt) {
  // Observables here have momentum degree at most a few times N; 3N+6
  // samples leave room to confirm that higher differences vanish.
  const int samples = 3 * pt.N + 8;
  std::vector<GaussianRational> vals;
  vals.reserve(samples);
  for (int s = 1; s <= samples; ++s) {
    std::vector<GaussianRational> p = pt.p;
    for (auto& v : p) v *= GaussianRational(s);
    EvalContext<GaussianRational> ctx(pt.x, p, pt.params);
    vals.push_back(obs.eval(ctx));
  }
  // forward difference table; order d is the last non-vanishing row
  int degree = -1;
  std::vector<GaussianRational> row = vals;
  for (int order = 0; order < samples; ++order) {
    bool all_zero = true;
    for (const auto& v : row) all_zero = all_zero && v.is_zero();
    if (!all_zero) degree = order;
    if (row.size() == 1) break;
    std::vector<GaussianRational> next;
    for (std::size_t i = 0; i + 1 < row.size(); ++i) next.push_back(row[i + 1] - row[i]);
    row = std::move(next);
  }
  if (degree > samples - 3) {
    throw StructuralError("momentum growth of " + obs.name() + " is not polynomial of low degree");
  }
  return degree;
}

}  // namespace cmsym
