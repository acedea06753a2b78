#include "cmsym/dynamics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iomanip>
#include <random>
#include <sstream>

#include "cmsym/poisson.hpp"

#ifdef CMSYM_HAVE_OPENMP
#include <omp.h>
#endif

namespace cmsym {

using CF = ComplexFloat;
using CVec = std::vector<CF>;

namespace {

double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double rel_dev(const CF& now, const CF& init) { return std::abs(now - init) / std::max(std::abs(init), 1.0); }

double min_separation(const CVec& x) {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = i + 1; j < x.size(); ++j) m = std::min(m, std::abs(x[i] - x[j]));
  return m;
}

bool has_tilde(const ModelParams& prm) { return lattice_h<CF>(prm) != CF(0.0, 0.0); }

}  // namespace

FloatPoint dynamics_start(int N, const ModelParams& params, std::uint64_t seed) {
  if (N < 1) throw ArityError("N must be at least 1");
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(N), 0x5eedu};
  std::mt19937_64 rng(seq);
  CVec x(N), p(N);
  for (int k = 0; k < N; ++k) x[k] = CF(2.0 * k + unit(rng) - 0.5, 0.0);
  for (int k = 0; k < N; ++k) p[k] = CF(2.0 * unit(rng) - 1.0, 0.0);
  return FloatPoint(std::move(x), std::move(p), params);
}

double Trajectory::max_drift(bool conserved_only) const {
  double m = 0.0;
  for (const auto& d : drift)
    if (!conserved_only || d.expected_conserved) m = std::max(m, d.max_rel);
  return m;
}

const DriftEntry& Trajectory::find(const std::string& name) const {
  for (const auto& d : drift)
    if (d.name == name) return d;
  throw ArityError("no monitored invariant named " + name);
}

std::vector<std::string> invariant_names(int N, bool with_tilde) {
  std::vector<std::string> names;
  for (int k = 1; k <= N; ++k) names.push_back("F" + std::to_string(k));
  for (int m = 2; m <= N; ++m)
    for (int n = 1; n < m; ++n) names.push_back("K" + pair_suffix(m, n));
  if (with_tilde)
    for (int m = 2; m <= N; ++m)
      for (int n = 1; n < m; ++n) names.push_back("Kt" + pair_suffix(m, n));
  return names;
}

std::vector<CF> invariant_values(const FloatPoint& pt, bool with_tilde) {
  EvalContext<CF> ctx(pt);
  const int N = pt.N;
  std::vector<CF> v;
  for (int k = 1; k <= N; ++k) v.push_back(ctx.F(k));
  for (int m = 2; m <= N; ++m)
    for (int n = 1; n < m; ++n) v.push_back(ctx.K(m, n));
  if (with_tilde)
    for (int m = 2; m <= N; ++m)
      for (int n = 1; n < m; ++n) v.push_back(ctx.Ktilde(m, n));
  return v;
}

// ---------------------------------------------------------------- flow

namespace {

struct Monitor {
  Trajectory& tr;
  std::vector<CF> J0, F0;

  void init(const FloatPoint& pt, bool tilde, bool tilde_conserved) {
    auto names = invariant_names(pt.N, tilde);
    auto vals = invariant_values(pt, tilde);
    for (std::size_t i = 0; i < names.size(); ++i) {
      DriftEntry d;
      d.name = names[i];
      d.initial = vals[i];
      const bool is_tilde = names[i].rfind("Kt", 0) == 0;
      const bool is_K = !is_tilde && names[i][0] == 'K';
      d.expected_conserved = is_tilde ? tilde_conserved : (is_K ? !tilde_conserved : true);
      tr.drift.push_back(d);
    }
    EvalContext<CF> ctx(pt);
    for (int k = 1; k <= pt.N; ++k) {
      J0.push_back(ctx.J(k));
      F0.push_back(ctx.F(k));
    }
  }

  std::vector<CF> update(const FloatPoint& pt, bool tilde) {
    auto vals = invariant_values(pt, tilde);
    for (std::size_t i = 0; i < vals.size(); ++i) {
      tr.drift[i].max_rel = std::max(tr.drift[i].max_rel, rel_dev(vals[i], tr.drift[i].initial));
      if (tr.drift[i].name[0] == 'F') tr.max_imag_F = std::max(tr.max_imag_F, std::abs(vals[i].imag()));
    }
    return vals;
  }

  void linear_J(const FloatPoint& pt, double t) {
    EvalContext<CF> ctx(pt);
    for (int k = 1; k <= pt.N; ++k) {
      const CF pred = J0[k - 1] + t * F0[k - 1];
      const double scale = std::max({std::abs(J0[k - 1]), std::abs(t * F0[k - 1]), 1.0});
      tr.linear_J_residual = std::max(tr.linear_J_residual, std::abs(ctx.J(k) - pred) / scale);
    }
  }
};

// state y = (x_1..x_N, p_1..p_N)
void cm_rhs(const CVec& y, CF nu2, int N, CVec& dy) {
  for (int i = 0; i < N; ++i) {
    dy[i] = y[N + i];
    CF f(0.0, 0.0);
    for (int k = 0; k < N; ++k) {
      if (k == i) continue;
      const CF d = y[i] - y[k];
      f += 1.0 / (d * d * d);
    }
    dy[N + i] = 2.0 * nu2 * f;
  }
}

// Dormand-Prince 5(4)
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

}  // namespace

Trajectory hamiltonian_flow(const FloatPoint& start, const FlowConfig& cfg) {
  if (start.params.mode != Mode::floating) throw UnsupportedParameterError("the flow runs in float mode");
  if (!(cfg.T > 0.0) || !(cfg.tol > 0.0)) throw ArityError("flow needs T > 0 and tol > 0");
  const int N = start.N;
  const int D = 2 * N;
  const CF nu = coupling<CF>(start.params);
  const CF nu2 = nu * nu;
  const bool tilde = has_tilde(start.params);

  Trajectory tr;
  tr.N = N;
  tr.kind = "flow";
  Monitor mon{tr, {}, {}};
  mon.init(start, tilde, false);

  auto record = [&](double t, const CVec& y, std::vector<CF> inv) {
    TrajectorySample s;
    s.t = t;
    s.x.assign(y.begin(), y.begin() + N);
    s.p.assign(y.begin() + N, y.end());
    s.invariants = std::move(inv);
    tr.samples.push_back(std::move(s));
  };

  CVec y(D);
  for (int i = 0; i < N; ++i) {
    y[i] = start.x[i];
    y[N + i] = start.p[i];
  }
  if (min_separation(start.x) < cfg.min_separation) throw CollisionError("start point is near a collision");
  record(0.0, y, invariant_values(start, tilde));

  std::array<CVec, 7> k;
  for (auto& v : k) v.assign(D, CF());
  CVec tmp(D), ynew(D);
  double t = 0.0;
  double h = std::min(cfg.h0, cfg.T);
  double err_prev = 1.0;
  cm_rhs(y, nu2, N, k[0]);
  long since_record = 0;

  auto stage = [&](auto&& combine, CVec& out) {
    for (int i = 0; i < D; ++i) tmp[i] = y[i] + h * combine(i);
    cm_rhs(tmp, nu2, N, out);
  };

  while (t < cfg.T) {
    if (tr.accepted + tr.rejected > cfg.max_steps) throw BranchFailure("flow exceeded the step budget");
    const bool last = t + h >= cfg.T;
    if (last) h = cfg.T - t;
    stage([&](int i) { return a21 * k[0][i]; }, k[1]);
    stage([&](int i) { return a31 * k[0][i] + a32 * k[1][i]; }, k[2]);
    stage([&](int i) { return a41 * k[0][i] + a42 * k[1][i] + a43 * k[2][i]; }, k[3]);
    stage([&](int i) { return a51 * k[0][i] + a52 * k[1][i] + a53 * k[2][i] + a54 * k[3][i]; }, k[4]);
    stage([&](int i) { return a61 * k[0][i] + a62 * k[1][i] + a63 * k[2][i] + a64 * k[3][i] + a65 * k[4][i]; },
          k[5]);
    for (int i = 0; i < D; ++i)
      ynew[i] = y[i] + h * (b1 * k[0][i] + b3 * k[2][i] + b4 * k[3][i] + b5 * k[4][i] + b6 * k[5][i]);
    cm_rhs(ynew, nu2, N, k[6]);
    double err = 0.0;
    for (int i = 0; i < D; ++i) {
      const CF e = h * (e1 * k[0][i] + e3 * k[2][i] + e4 * k[3][i] + e5 * k[4][i] + e6 * k[5][i] + e7 * k[6][i]);
      const double sc = cfg.tol * (1.0 + std::max(std::abs(y[i]), std::abs(ynew[i])));
      err += std::norm(e) / (sc * sc);
    }
    err = std::sqrt(err / D);
    if (!std::isfinite(err)) err = 1e10;

    if (err <= 1.0) {
      t = last ? cfg.T : t + h;
      y.swap(ynew);
      k[0] = k[6];  // first-same-as-last
      ++tr.accepted;
      CVec xs(y.begin(), y.begin() + N);
      if (min_separation(xs) < cfg.min_separation) {
        std::ostringstream os;
        os << "near collision at t = " << t << " (separation " << min_separation(xs) << ")";
        throw CollisionError(os.str());
      }
      FloatPoint pt(xs, CVec(y.begin() + N, y.end()), start.params);
      auto inv = mon.update(pt, tilde);
      mon.linear_J(pt, t);
      if (++since_record >= cfg.record_every || t >= cfg.T) {
        record(t, y, std::move(inv));
        since_record = 0;
      }
      double fac = 0.9 * std::pow(std::max(err, 1e-10), -0.7 / 5) * std::pow(err_prev, 0.4 / 5);
      h *= std::clamp(fac, 0.2, 5.0);
      err_prev = std::max(err, 1e-4);
    } else {
      ++tr.rejected;
      h *= std::max(0.2, 0.9 * std::pow(err, -1.0 / 5));
    }
    if (h < 1e-14 * std::max(1.0, t)) throw CollisionError("step size underflow at t = " + std::to_string(t));
  }
  return tr;
}

// ---------------------------------------------------------------- map

CVec map_residual(const FloatPoint& pt, const CVec& xbar) {
  const int N = pt.N;
  const CF c = c0<CF>(pt.params);
  const CF h = lattice_h<CF>(pt.params);
  CVec r(N);
  for (int k = 0; k < N; ++k) {
    CF sa(0.0, 0.0), sb(0.0, 0.0);
    for (int j = 0; j < N; ++j) {
      sa += 1.0 / (xbar[j] - pt.x[k] + c);
      if (j != k) sb += 1.0 / (pt.x[j] - pt.x[k]);
    }
    r[k] = c / h * (1.0 - c * sa + c * sb) - pt.p[k];
  }
  return r;
}

CVec map_momenta(const FloatPoint& pt, const CVec& xbar) {
  const int N = pt.N;
  const CF c = c0<CF>(pt.params);
  const CF h = lattice_h<CF>(pt.params);
  CVec pb(N);
  for (int k = 0; k < N; ++k) {
    CF sa(0.0, 0.0), sb(0.0, 0.0);
    for (int j = 0; j < N; ++j) {
      sa += 1.0 / (xbar[k] - pt.x[j] + c);
      if (j != k) sb += 1.0 / (xbar[k] - xbar[j]);
    }
    pb[k] = c / h * (1.0 - c * sa + c * sb);
  }
  return pb;
}

namespace {

double max_norm(const CVec& v) {
  double m = 0.0;
  for (const auto& z : v) m = std::max(m, std::abs(z));
  return m;
}

}  // namespace

MapStepResult np_map(const FloatPoint& pt, const NewtonConfig& cfg) {
  if (pt.params.mode != Mode::floating) throw UnsupportedParameterError("the map runs in float mode");
  const CF h = lattice_h<CF>(pt.params);
  if (h == CF(0.0)) {
    // the continuum point: the correspondence degenerates to the identity
    MapStepResult id;
    id.xbar = pt.x;
    id.pbar = pt.p;
    return id;
  }
  if (!(h.real() > 0.0)) throw ConventionError("the map needs h >= 0");
  const int N = pt.N;
  const CF c = c0<CF>(pt.params);
  const CF q = c * c / h;
  const double scale = std::max(1.0, max_norm(pt.p));

  MapStepResult out;
  CVec xb(N);
  for (int k = 0; k < N; ++k) xb[k] = pt.x[k] + h * pt.p[k];
  CVec r = map_residual(pt, xb);
  double rn = max_norm(r);
  for (int it = 0; it < cfg.max_iter && rn > cfg.tol * scale; ++it) {
    SquareMatrix<CF> J(N);
    for (int k = 0; k < N; ++k)
      for (int j = 0; j < N; ++j) {
        const CF a = 1.0 / (xb[j] - pt.x[k] + c);
        J(k, j) = q * a * a;
      }
    CVec rhs(N);
    for (int k = 0; k < N; ++k) rhs[k] = -r[k];
    CVec dx;
    try {
      dx = solve(J, rhs);
    } catch (const SingularPointError&) {
      throw BranchFailure("near-singular Newton Jacobian at iteration " + std::to_string(it));
    }
    double lambda = 1.0;
    CVec trial(N), rt;
    double tn = 0.0;
    for (;;) {
      for (int k = 0; k < N; ++k) trial[k] = xb[k] + lambda * dx[k];
      rt = map_residual(pt, trial);
      tn = max_norm(rt);
      if (std::isfinite(tn) && tn < rn) break;
      lambda *= 0.5;
      if (lambda < 1.0 / 1024) break;
    }
    ++out.newton_iters;
    if (!(std::isfinite(tn) && tn < rn)) {
      // full-precision stagnation just above the target counts as converged
      if (rn <= 1e3 * cfg.tol * scale) break;
      throw BranchFailure("Newton line search failed (residual " + std::to_string(rn) + ")");
    }
    xb.swap(trial);
    r.swap(rt);
    rn = tn;
  }
  if (!(rn <= 1e3 * cfg.tol * scale))
    throw BranchFailure("Newton did not converge (residual " + std::to_string(rn) + ")");
  out.xbar = xb;
  out.pbar = map_momenta(pt, xb);
  out.residual = rn;
  return out;
}

IsospectralResidual check_isospectral(const FloatPoint& pt, const MapStepResult& step) {
  const int N = pt.N;
  FloatPoint next(step.xbar, step.pbar, pt.params);
  EvalContext<CF> a(pt), b(next);
  IsospectralResidual res;
  for (int k = 1; k <= N; ++k)
    res.traces = std::max(res.traces, std::abs(b.F(k) - a.F(k)) / std::max(std::abs(a.F(k)), 1.0));
  SquareMatrix<CF> Mt = build_Mtilde(pt, step.xbar);
  SquareMatrix<CF> d = b.L() * Mt - Mt * a.L();
  res.lax = d.max_abs() / std::max(Mt.max_abs() * std::max(a.L().max_abs(), b.L().max_abs()), 1.0);
  return res;
}

XProblemResidual x_problem_residual(const FloatPoint& pt, const MapStepResult& step) {
  const int N = pt.N;
  const CF h = lattice_h<CF>(pt.params);
  const CF hc = h_over_c0<CF>(pt.params);
  SquareMatrix<CF> L = build_L(pt);
  SquareMatrix<CF> Mt = build_Mtilde(pt, step.xbar);
  SquareMatrix<CF> X = SquareMatrix<CF>::diagonal(pt.x);
  SquareMatrix<CF> Xb = SquareMatrix<CF>::diagonal(step.xbar);
  SquareMatrix<CF> W = inverse(SquareMatrix<CF>::identity(N) - L * hc);
  SquareMatrix<CF> term = Mt * L * W * h;
  SquareMatrix<CF> d = Xb * Mt - Mt * X - term;
  const double sc = std::max({(Xb * Mt).max_abs(), (Mt * X).max_abs(), term.max_abs(), 1.0});
  XProblemResidual res;
  res.matrix = d.max_abs() / sc;
  EvalContext<CF> a(pt), b(FloatPoint(step.xbar, step.pbar, pt.params));
  for (int m = 0; m <= 2 * N; ++m) {
    const CF shift = h * a.F(m);
    const double scale = std::max({std::abs(a.Jtilde(m)), std::abs(shift), 1.0});
    res.trace = std::max(res.trace, std::abs(b.Jtilde(m) - a.Jtilde(m) - shift) / scale);
  }
  return res;
}

SquareMatrix<CF> map_jacobian(const FloatPoint& pt, const MapStepResult& step) {
  const int N = pt.N;
  const CF c = c0<CF>(pt.params);
  const CF h = lattice_h<CF>(pt.params);
  const CF q = c * c / h;
  const CVec& x = pt.x;
  const CVec& xb = step.xbar;
  auto sq = [](CF z) { return z * z; };

  SquareMatrix<CF> Rxb(N), Rx(N), Gxb(N), Gx(N);
  for (int k = 0; k < N; ++k) {
    CF diag_x(0.0, 0.0), diag_g(0.0, 0.0);
    for (int j = 0; j < N; ++j) {
      const CF A2 = sq(1.0 / (xb[j] - x[k] + c));
      Rxb(k, j) = q * A2;
      diag_x -= q * A2;
      const CF C2 = sq(1.0 / (xb[k] - x[j] + c));
      Gx(k, j) = -q * C2;
      diag_g += q * C2;
      if (j == k) continue;
      const CF B2 = sq(1.0 / (x[j] - x[k]));
      Rx(k, j) = -q * B2;
      diag_x += q * B2;
      const CF E2 = sq(1.0 / (xb[k] - xb[j]));
      Gxb(k, j) = q * E2;
      diag_g -= q * E2;
    }
    Rx(k, k) = diag_x;
    Gxb(k, k) = diag_g;
  }
  // dxbar = -Rxb^{-1} [Rx | -1]
  SquareMatrix<CF> Ri = inverse(Rxb);
  SquareMatrix<CF> dX_dx = Ri * Rx * CF(-1.0, 0.0);
  SquareMatrix<CF> dX_dp = Ri;
  SquareMatrix<CF> dP_dx = Gxb * dX_dx + Gx;
  SquareMatrix<CF> dP_dp = Gxb * dX_dp;
  SquareMatrix<CF> D(2 * N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      D(i, j) = dX_dx(i, j);
      D(i, N + j) = dX_dp(i, j);
      D(N + i, j) = dP_dx(i, j);
      D(N + i, N + j) = dP_dp(i, j);
    }
  return D;
}

SquareMatrix<CF> map_jacobian_fd(const FloatPoint& pt, double eps, const NewtonConfig& cfg) {
  const int N = pt.N;
  SquareMatrix<CF> D(2 * N);
  for (int c = 0; c < 2 * N; ++c) {
    FloatPoint plus = pt, minus = pt;
    auto& vp = c < N ? plus.x[c] : plus.p[c - N];
    auto& vm = c < N ? minus.x[c] : minus.p[c - N];
    vp += eps;
    vm -= eps;
    MapStepResult a = np_map(plus, cfg), b = np_map(minus, cfg);
    for (int r = 0; r < N; ++r) {
      D(r, c) = (a.xbar[r] - b.xbar[r]) / (2.0 * eps);
      D(N + r, c) = (a.pbar[r] - b.pbar[r]) / (2.0 * eps);
    }
  }
  return D;
}

double symplectic_defect(const SquareMatrix<CF>& D) {
  const int n = D.dim() / 2;
  SquareMatrix<CF> Om(2 * n);
  for (int i = 0; i < n; ++i) {
    Om(i, n + i) = CF(1.0, 0.0);
    Om(n + i, i) = CF(-1.0, 0.0);
  }
  return (D.transpose() * Om * D - Om).max_abs();
}

double check_symplectic(const FloatPoint& pt, const NewtonConfig& cfg) {
  return symplectic_defect(map_jacobian(pt, np_map(pt, cfg)));
}

Trajectory iterate_map(const FloatPoint& start, const MapConfig& cfg) {
  if (cfg.steps < 1) throw ArityError("map needs at least one step");
  const int N = start.N;
  const double h = lattice_h<CF>(start.params).real();
  Trajectory tr;
  tr.N = N;
  tr.kind = "map";
  Monitor mon{tr, {}, {}};
  mon.init(start, true, true);

  auto record = [&](double t, const FloatPoint& pt, std::vector<CF> inv) {
    tr.samples.push_back({t, pt.x, pt.p, std::move(inv)});
  };
  record(0.0, start, invariant_values(start, true));

  FloatPoint pt = start;
  for (int s = 1; s <= cfg.steps; ++s) {
    MapStepResult step;
    try {
      step = np_map(pt, cfg.newton);
    } catch (const BranchFailure& e) {
      throw BranchFailure("step " + std::to_string(s) + ": " + e.what());
    }
    tr.accepted += step.newton_iters;
    if (cfg.check_every > 0 && (s - 1) % cfg.check_every == 0) {
      IsospectralResidual iso = check_isospectral(pt, step);
      tr.isospectral_residual = std::max(tr.isospectral_residual, iso.traces);
      tr.lax_residual = std::max(tr.lax_residual, iso.lax);
      XProblemResidual xp = x_problem_residual(pt, step);
      tr.x_problem_residual = std::max(tr.x_problem_residual, xp.trace);
      tr.x_problem_matrix = std::max(tr.x_problem_matrix, xp.matrix);
      tr.symplectic_residual = std::max(tr.symplectic_residual, symplectic_defect(map_jacobian(pt, step)));
    }
    FloatPoint next(step.xbar, step.pbar, pt.params);
    if (min_separation(next.x) < kDefaultSeparation)
      throw CollisionError("step " + std::to_string(s) + ": coincident positions");
    auto inv = mon.update(next, true);
    if (s % std::max(cfg.record_every, 1) == 0 || s == cfg.steps) record(s * h, next, std::move(inv));
    pt = std::move(next);
  }
  return tr;
}

OrderEstimate map_flow_order(const FloatPoint& start, const std::vector<double>& h_grid) {
  OrderEstimate est;
  const double nu = start.params.nu.to_complex().real();
  for (double h : h_grid) {
    ModelParams prm = ModelParams::floating(nu, h, Convention::repulsive);
    prm.nu = start.params.nu;
    FloatPoint pt(start.x, start.p, prm);
    MapStepResult step = np_map(pt, {1e-14, 80});
    FlowConfig fc;
    fc.T = h;
    fc.tol = 1e-14;
    fc.h0 = h / 16;
    Trajectory tr = hamiltonian_flow(FloatPoint(start.x, start.p, ModelParams::floating(nu, 0.0)), fc);
    const auto& end = tr.samples.back();
    double dev = 0.0;
    for (int k = 0; k < start.N; ++k) {
      dev = std::max(dev, std::abs(step.xbar[k] - end.x[k]));
      dev = std::max(dev, std::abs(step.pbar[k] - end.p[k]));
    }
    est.h.push_back(h);
    est.deviation.push_back(dev);
  }
  est.slope = loglog_slope(est.h, est.deviation);
  return est;
}

// ---------------------------------------------------------------- scan

std::vector<Rational> default_s_grid() {
  std::vector<Rational> g{Rational(0)};
  for (int k = 0; k <= 9; ++k) g.push_back(Rational(1, 1L << k));
  g.push_back(Rational(1, 1000));
  return g;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) continue;
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  if (n < 2) return std::nan("");
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

namespace {

ScanRow scan_row(const Rational& nu, const Rational& s, const PhasePoint<GaussianRational>& base) {
  using GR = GaussianRational;
  ModelParams prm = ModelParams::exact(nu, s);
  PhasePoint<GR> pt(base.x, base.p, prm);
  ScanRow row;
  row.s = s;
  row.h = lattice_h<CF>(prm).real();
  row.bracket = bracket(Observable::F(2), Observable::Ktilde(2, 1), pt);
  EvalContext<GR> ctx(pt);
  const GR F1 = ctx.F(1), F2 = ctx.F(2);
  const GR closed = alpha_sqrt_h<GR>(prm) * (F1 * F1 - GR(2) * F2) * (F1 * F1 - F2);
  row.residual = row.bracket - closed;
  row.magnitude = std::abs(row.bracket.to_complex());
  return row;
}

LimitScan finish_scan(std::vector<ScanRow> rows) {
  LimitScan scan;
  scan.rows = std::move(rows);
  std::vector<double> h, m;
  for (const auto& r : scan.rows) {
    if (!r.residual.is_zero()) scan.residuals_zero = false;
    if (sgn(r.s) > 0) {
      h.push_back(r.h);
      m.push_back(r.magnitude);
    }
  }
  scan.slope = loglog_slope(h, m);
  return scan;
}

PhasePoint<GaussianRational> scan_point(const Rational& nu, std::uint64_t seed) {
  SamplerConfig cfg;
  for (int attempt = 0; attempt < cfg.max_attempts; ++attempt) {
    auto pt = sample_point(2, ModelParams::exact(nu, Rational(1)), cfg, seed, 0, attempt);
    EvalContext<GaussianRational> ctx(pt);
    const auto F1 = ctx.F(1), F2 = ctx.F(2);
    // a point where the deformation block vanishes would say nothing about scaling
    if (!((F1 * F1 - GaussianRational(2) * F2) * (F1 * F1 - F2)).is_zero()) return pt;
  }
  throw SamplerError("no usable scan point");
}

}  // namespace

LimitScan continuum_limit_scan(const Rational& nu, const std::vector<Rational>& s_grid, std::uint64_t seed) {
  if (s_grid.empty()) throw ArityError("empty s grid");
  const auto base = scan_point(nu, seed);
  std::vector<ScanRow> rows(s_grid.size());
  const long n = static_cast<long>(s_grid.size());
#ifdef CMSYM_HAVE_OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (long i = 0; i < n; ++i) rows[i] = scan_row(nu, s_grid[i], base);
  return finish_scan(std::move(rows));
}

LimitScan continuum_limit_scan_serial(const Rational& nu, const std::vector<Rational>& s_grid, std::uint64_t seed) {
  if (s_grid.empty()) throw ArityError("empty s grid");
  const auto base = scan_point(nu, seed);
  std::vector<ScanRow> rows;
  for (const auto& s : s_grid) rows.push_back(scan_row(nu, s, base));
  return finish_scan(std::move(rows));
}

// ---------------------------------------------------------------- csv

std::string trajectory_csv(const Trajectory& tr) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "t";
  for (int k = 1; k <= tr.N; ++k) os << ",x" << k << "_re,x" << k << "_im";
  for (int k = 1; k <= tr.N; ++k) os << ",p" << k << "_re,p" << k << "_im";
  for (const auto& d : tr.drift) os << "," << d.name << "_re," << d.name << "_im," << d.name << "_drift";
  os << "\n";
  for (const auto& s : tr.samples) {
    os << s.t;
    for (const auto& z : s.x) os << "," << z.real() << "," << z.imag();
    for (const auto& z : s.p) os << "," << z.real() << "," << z.imag();
    for (std::size_t i = 0; i < s.invariants.size(); ++i)
      os << "," << s.invariants[i].real() << "," << s.invariants[i].imag() << ","
         << rel_dev(s.invariants[i], tr.drift[i].initial);
    os << "\n";
  }
  return os.str();
}

std::string scan_csv(const LimitScan& scan) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "s,h,bracket_re,bracket_im,magnitude,residual\n";
  for (const auto& r : scan.rows) {
    os << rational_str(r.s) << "," << r.h << "," << r.bracket.re().get_d() << "," << r.bracket.im().get_d()
       << "," << r.magnitude << "," << r.residual.str() << "\n";
  }
  return os.str();
}

}  // namespace cmsym
