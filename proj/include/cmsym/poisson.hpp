#pragma once

// Pointwise canonical Poisson brackets through forward jets, random exact
// sample points, and multi-point identity testing.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#ifdef CMSYM_HAVE_OPENMP
#include <omp.h>
#endif

#include "cmsym/errors.hpp"
#include "cmsym/jet.hpp"
#include "cmsym/observables.hpp"
#include "cmsym/phase.hpp"
#include "cmsym/scalar.hpp"

namespace cmsym {

// ---------------------------------------------------------------------------
// Gradients and brackets.

/// Values and phase-space gradients of a batch of functions at one point.
/// Coordinates are ordered (x_1..x_N, p_1..p_N).
template <class B>
struct GradientSet {
  int N = 0;
  std::vector<B> value;
  std::vector<std::vector<B>> grad;  // grad[f][c], c < 2N
};

namespace detail {

template <class B>
void seed_point(const PhasePoint<B>& pt, int c, std::vector<Jet<B>>& x, std::vector<Jet<B>>& p) {
  const int n = pt.N;
  x.clear();
  p.clear();
  for (int i = 0; i < n; ++i) {
    x.emplace_back(pt.x[i], from_int<B>(c == i ? 1 : 0));
    p.emplace_back(pt.p[i], from_int<B>(c == n + i ? 1 : 0));
  }
}

}  // namespace detail

/// Run `fn(EvalContext<Jet<B>>&) -> std::vector<Jet<B>>` once per canonical
/// coordinate (2N seeded passes) and collect values and gradients.
template <class B, class Fn>
GradientSet<B> gradients_of(Fn&& fn, const PhasePoint<B>& pt) {
  const int n = pt.N;
  GradientSet<B> g;
  g.N = n;
  std::vector<Jet<B>> x, p;
  for (int c = 0; c < 2 * n; ++c) {
    detail::seed_point(pt, c, x, p);
    EvalContext<Jet<B>> ctx(x, p, pt.params);
    std::vector<Jet<B>> out = fn(ctx);
    if (c == 0) {
      g.value.resize(out.size());
      g.grad.assign(out.size(), std::vector<B>(2 * n, zero<B>()));
      for (std::size_t f = 0; f < out.size(); ++f) g.value[f] = out[f].v;
    }
    for (std::size_t f = 0; f < out.size(); ++f) g.grad[f][c] = out[f].d;
  }
  return g;
}

template <class B>
GradientSet<B> gradients(const std::vector<Observable>& obs, const PhasePoint<B>& pt) {
  return gradients_of(
      [&](EvalContext<Jet<B>>& ctx) {
        std::vector<Jet<B>> out;
        out.reserve(obs.size());
        for (const auto& o : obs) out.push_back(o.eval(ctx));
        return out;
      },
      pt);
}

/// {u, v} = sum_i du/dx_i dv/dp_i - du/dp_i dv/dx_i from two gradients.
template <class B>
B poisson_from_gradients(const std::vector<B>& du, const std::vector<B>& dv, int N) {
  B acc = zero<B>();
  for (int i = 0; i < N; ++i) acc += du[i] * dv[N + i] - du[N + i] * dv[i];
  return acc;
}

template <class B>
B bracket(const GradientSet<B>& g, std::size_t a, std::size_t b) {
  return poisson_from_gradients(g.grad[a], g.grad[b], g.N);
}

template <class B>
B bracket(const Observable& f, const Observable& g, const PhasePoint<B>& pt) {
  GradientSet<B> gs = gradients<B>({f, g}, pt);
  return bracket(gs, 0, 1);
}

/// Value, gradient and Hessian of one function via nested jets.
template <class B>
struct HessianSet {
  B value;
  std::vector<B> grad;
  std::vector<std::vector<B>> hess;
};

template <class B, class Fn>
HessianSet<B> hessian_of(Fn&& fn, const PhasePoint<B>& pt) {
  using J2 = Jet<Jet<B>>;
  const int n = pt.N;
  const int dim = 2 * n;
  HessianSet<B> h;
  h.grad.assign(dim, zero<B>());
  h.hess.assign(dim, std::vector<B>(dim, zero<B>()));
  auto coord = [&](int k) -> const B& { return k < n ? pt.x[k] : pt.p[k - n]; };
  for (int c = 0; c < dim; ++c) {
    for (int d = c; d < dim; ++d) {
      std::vector<J2> x, p;
      for (int k = 0; k < dim; ++k) {
        Jet<B> inner(coord(k), from_int<B>(k == d ? 1 : 0));
        Jet<B> outer_seed(from_int<B>(k == c ? 1 : 0), zero<B>());
        (k < n ? x : p).emplace_back(inner, outer_seed);
      }
      EvalContext<J2> ctx(x, p, pt.params);
      J2 r = fn(ctx);
      if (c == 0 && d == 0) h.value = r.v.v;
      if (c == 0) h.grad[d] = r.v.d;
      h.hess[c][d] = r.d.d;
      h.hess[d][c] = r.d.d;
    }
  }
  return h;
}

template <class B>
HessianSet<B> hessian(const Observable& obs, const PhasePoint<B>& pt) {
  return hessian_of([&](auto& ctx) { return obs.eval(ctx); }, pt);
}

/// {f,{g,h}} + {g,{h,f}} + {h,{f,g}} from exact second derivatives.
template <class B>
B jacobi_check(const Observable& f, const Observable& g, const Observable& h, const PhasePoint<B>& pt) {
  const int n = pt.N;
  const int dim = 2 * n;
  HessianSet<B> H[3] = {hessian(f, pt), hessian(g, pt), hessian(h, pt)};
  // gradient of {u, v}: d_c {u,v} = sum_i (H_u[c][i] v_{p_i} + u_{x_i} H_v[c][n+i]
  //                                      - H_u[c][n+i] v_{x_i} - u_{p_i} H_v[c][i])
  auto grad_bracket = [&](const HessianSet<B>& u, const HessianSet<B>& v) {
    std::vector<B> out(dim, zero<B>());
    for (int c = 0; c < dim; ++c) {
      B acc = zero<B>();
      for (int i = 0; i < n; ++i) {
        acc += u.hess[c][i] * v.grad[n + i] + u.grad[i] * v.hess[c][n + i];
        acc -= u.hess[c][n + i] * v.grad[i] + u.grad[n + i] * v.hess[c][i];
      }
      out[c] = acc;
    }
    return out;
  };
  B total = zero<B>();
  for (int k = 0; k < 3; ++k) {
    const HessianSet<B>& a = H[k];
    const HessianSet<B>& b = H[(k + 1) % 3];
    const HessianSet<B>& c = H[(k + 2) % 3];
    total += poisson_from_gradients(a.grad, grad_bracket(b, c), n);
  }
  return total;
}

// ---------------------------------------------------------------------------
// Sampling.

struct SamplerConfig {
  long numerator_bound = 20;  // numerators in [-bound, bound]
  long denominator_max = 8;   // denominators in [1, max]
  Rational min_separation{1, 16};
  int max_attempts = 64;
};

/// Deterministic rational sample point. `index` and `attempt` select
/// independent streams so that parallel workers reproduce serial runs.
PhasePoint<GaussianRational> sample_point(int N, const ModelParams& params, const SamplerConfig& cfg,
                                          std::uint64_t seed, std::uint64_t index = 0,
                                          std::uint64_t attempt = 0);

template <class B>
PhasePoint<B> convert_point(const PhasePoint<GaussianRational>& pt) {
  PhasePoint<B> out;
  out.N = pt.N;
  out.params = pt.params;
  for (const auto& v : pt.x) out.x.push_back(convert<B>(v));
  for (const auto& v : pt.p) out.p.push_back(convert<B>(v));
  return out;
}

// ---------------------------------------------------------------------------
// Identity testing.

enum class VerdictKind { holds, refuted, error };

std::string to_string(VerdictKind v);

struct Witness {
  int sample = -1;
  std::vector<std::string> x, p;
  std::string residual;
};

struct Verdict {
  std::string name;
  VerdictKind kind = VerdictKind::holds;
  int samples = 0;         // points evaluated
  int rejected = 0;        // singular draws that were resampled
  double max_residual = 0.0;
  std::optional<Witness> witness;
  std::string diagnostic;

  bool holds() const { return kind == VerdictKind::holds; }
};

struct IdentityTest {
  int N = 2;
  ModelParams params;
  SamplerConfig sampler;
  std::uint64_t seed = 1;
  int samples = 5;
  double tol = 1e-9;  // float mode only; exact mode demands exact zero
};

namespace detail {

template <class B>
struct SampleOutcome {
  bool ok = false;
  int rejected = 0;
  std::string error;
  PhasePoint<GaussianRational> point;
  std::vector<B> residuals;
};

template <class B, class Fn>
SampleOutcome<B> run_sample(const IdentityTest& t, int k, Fn& fn) {
  SampleOutcome<B> out;
  for (int attempt = 0; attempt < t.sampler.max_attempts; ++attempt) {
    try {
      PhasePoint<GaussianRational> pt = sample_point(t.N, t.params, t.sampler, t.seed, k, attempt);
      out.residuals = fn(convert_point<B>(pt));
      out.point = std::move(pt);
      out.ok = true;
      return out;
    } catch (const SingularPointError&) {
      ++out.rejected;
    } catch (const std::exception& e) {
      out.error = e.what();
      return out;
    }
  }
  out.error = "sampler exhausted after " + std::to_string(t.sampler.max_attempts) + " attempts";
  return out;
}

template <class B>
bool residual_is_zero(const B& r, double tol) {
  if constexpr (is_exact_v<B>) {
    return is_zero(r);
  } else {
    return std::abs(r) <= tol;
  }
}

template <class B>
std::vector<Verdict> merge_outcomes(const std::vector<std::string>& names, const IdentityTest& t,
                                    const std::vector<SampleOutcome<B>>& outcomes) {
  std::vector<Verdict> verdicts(names.size());
  for (std::size_t f = 0; f < names.size(); ++f) verdicts[f].name = names[f];
  for (int k = 0; k < static_cast<int>(outcomes.size()); ++k) {
    const auto& o = outcomes[k];
    for (std::size_t f = 0; f < names.size(); ++f) {
      Verdict& v = verdicts[f];
      v.rejected += o.rejected;
      if (!o.ok) {
        if (v.kind != VerdictKind::refuted) {
          v.kind = VerdictKind::error;
          if (v.diagnostic.empty()) v.diagnostic = "sample " + std::to_string(k) + ": " + o.error;
        }
        continue;
      }
      if (o.residuals.size() != names.size()) throw StructuralError("residual count mismatch");
      ++v.samples;
      const B& r = o.residuals[f];
      v.max_residual = std::max(v.max_residual, scalar_traits<B>::magnitude(r));
      if (!residual_is_zero(r, t.tol) && v.kind != VerdictKind::refuted) {
        v.kind = VerdictKind::refuted;
        Witness w;
        w.sample = k;
        for (const auto& z : o.point.x) w.x.push_back(z.str());
        for (const auto& z : o.point.p) w.p.push_back(z.str());
        if constexpr (is_exact_v<B>) {
          w.residual = r.str();
        } else {
          w.residual = GaussianRational(Rational(r.real()), Rational(r.imag())).str();
        }
        v.witness = std::move(w);
      }
    }
  }
  return verdicts;
}

}  // namespace detail

/// Evaluate a family of residuals (one per name) at `samples` sample points,
/// in parallel over points. Verdicts are merged in sample order, so the
/// result does not depend on the thread count.
template <class B = GaussianRational, class Fn>
std::vector<Verdict> verify_family(const std::vector<std::string>& names, const IdentityTest& t, Fn fn) {
  std::vector<detail::SampleOutcome<B>> outcomes(t.samples);
#ifdef CMSYM_HAVE_OPENMP
#pragma omp parallel for schedule(dynamic, 1)
#endif
  for (int k = 0; k < t.samples; ++k) outcomes[k] = detail::run_sample<B>(t, k, fn);
  return detail::merge_outcomes(names, t, outcomes);
}

/// Serial reference implementation of verify_family.
template <class B = GaussianRational, class Fn>
std::vector<Verdict> verify_family_serial(const std::vector<std::string>& names, const IdentityTest& t,
                                          Fn fn) {
  std::vector<detail::SampleOutcome<B>> outcomes(t.samples);
  for (int k = 0; k < t.samples; ++k) outcomes[k] = detail::run_sample<B>(t, k, fn);
  return detail::merge_outcomes(names, t, outcomes);
}

/// Single residual `fn(PhasePoint<B>) -> B`.
template <class B = GaussianRational, class Fn>
Verdict verify_identity(const std::string& name, const IdentityTest& t, Fn fn) {
  return verify_family<B>({name}, t, [&fn](const PhasePoint<B>& pt) { return std::vector<B>{fn(pt)}; })
      .front();
}

template <class B = GaussianRational, class Fn>
Verdict verify_identity_serial(const std::string& name, const IdentityTest& t, Fn fn) {
  return verify_family_serial<B>({name}, t,
                                 [&fn](const PhasePoint<B>& pt) { return std::vector<B>{fn(pt)}; })
      .front();
}

}  // namespace cmsym
