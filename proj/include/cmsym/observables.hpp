#pragma once

#include <array>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "cmsym/errors.hpp"
#include "cmsym/matrix.hpp"
#include "cmsym/phase.hpp"
#include "cmsym/scalar.hpp"

namespace cmsym {

/// Continuous Calogero-Moser model or its Nijhoff-Pang discretization.
enum class Model { continuous, discrete };

std::string to_string(Model m);
Model parse_model(const std::string& s);

/// Version of the observable / generator naming scheme used in reports.
inline constexpr const char* kNamingConvention = "cmsym-names/1";

template <class T>
class EvalContext;

enum class ObsKind { zero, F, J, K, Kflow, Ktilde, coord, product };

/// Symbolic descriptor of a phase-space function. K, Kflow and Ktilde are
/// stored with m > n and a sign; equal indices collapse to the zero observable.
class Observable {
 public:
  Observable() = default;

  static Observable zero();
  static Observable F(int k);
  static Observable J(int k);
  static Observable K(int m, int n);
  static Observable Kflow(int a, int m, int n);
  static Observable Ktilde(int m, int n);
  /// K for the continuous model, Ktilde for the discrete one.
  static Observable K(Model model, int m, int n) { return model == Model::continuous ? K(m, n) : Ktilde(m, n); }
  static Observable x(int i);  // 1-based
  static Observable p(int i);
  static Observable product(const Observable& f, const Observable& g);

  /// Parse "F3", "J2", "K31", "Kt32", "Kf1_42", "K10_3", "x1", "p2", "-K21".
  static Observable parse(const std::string& name);

  ObsKind kind() const { return kind_; }
  int sign() const { return sign_; }
  const std::array<int, 3>& idx() const { return idx_; }

  Observable operator-() const {
    Observable o = *this;
    o.sign_ = -o.sign_;
    return o;
  }

  std::string name() const;

  template <class T>
  T eval(EvalContext<T>& ctx) const;

  friend bool operator==(const Observable& a, const Observable& b);

 private:
  ObsKind kind_ = ObsKind::zero;
  int sign_ = 1;
  std::array<int, 3> idx_{0, 0, 0};
  std::shared_ptr<const std::array<Observable, 2>> factors_;
};

/// "31" for small indices, "10_3" once either index has two digits.
std::string pair_suffix(int m, int n);

/// Per-point evaluation context. Matrix powers and traces are memoized;
/// a context is not meant to be shared between threads.
template <class T>
class EvalContext {
 public:
  EvalContext(std::vector<T> x, std::vector<T> p, const ModelParams& prm)
      : x_(std::move(x)), p_(std::move(p)), params_(prm), L_(build_L(x_, p_, prm)) {}

  explicit EvalContext(const PhasePoint<T>& pt) : EvalContext(pt.x, pt.p, pt.params) {}

  int N() const { return L_.dim(); }
  const ModelParams& params() const { return params_; }
  const std::vector<T>& x() const { return x_; }
  const std::vector<T>& p() const { return p_; }
  const SquareMatrix<T>& L() const { return L_; }

  /// L^k for any integer k; k < 0 requires invertible L.
  const SquareMatrix<T>& L_power(int k) {
    auto it = powers_.find(k);
    if (it != powers_.end()) return it->second;
    SquareMatrix<T> m;
    if (k == 0) {
      m = SquareMatrix<T>::identity(N());
    } else if (k == 1) {
      m = L_;
    } else if (k > 1) {
      m = L_power(k - 1) * L_;
    } else if (k == -1) {
      if constexpr (is_exact_v<T>) {
        // an exactly singular L is a rejected point, not an arithmetic error
        if (primal_is_zero(determinant(L_))) throw SingularPointError("L is singular, J_0 undefined");
      }
      m = inverse(L_);
    } else {
      m = L_power(k + 1) * L_power(-1);
    }
    return powers_.emplace(k, std::move(m)).first->second;
  }

  /// F_k = tr L^k (F_0 = N).
  T F(int k) {
    auto it = F_.find(k);
    if (it != F_.end()) return it->second;
    T v = (k == 0) ? from_int<T>(N()) : L_power(k).trace();
    F_.emplace(k, v);
    return v;
  }

  /// J_k = tr(X L^{k-1}), J_0 = tr(X L^{-1}).
  T J(int k) {
    auto it = J_.find(k);
    if (it != J_.end()) return it->second;
    const SquareMatrix<T>& P = L_power(k - 1);
    T v = zero<T>();
    for (int i = 0; i < N(); ++i) v += x_[i] * P(i, i);
    J_.emplace(k, v);
    return v;
  }

  T K(int m, int n) { return J(m) * F(n) - J(n) * F(m); }

  /// Higher flow K^(a)_{m,n} = J_m F_{a+n-2} - J_n F_{a+m-2}.
  T Kflow(int a, int m, int n) { return J(m) * F(a + n - 2) - J(n) * F(a + m - 2); }

  /// Jtilde_m = tr[X (1 - h c0^{-1} L) L^{m-1}], built from the matrices.
  T Jtilde(int m) {
    auto it = Jt_.find(m);
    if (it != Jt_.end()) return it->second;
    if (!Y_) {
      const T hc = lift<T>(h_over_c0<base_t<T>>(params_));
      SquareMatrix<T> one_minus = SquareMatrix<T>::identity(N()) - L_ * hc;
      Y_ = std::make_unique<SquareMatrix<T>>(SquareMatrix<T>::diagonal(x_) * one_minus);
    }
    T v = (*Y_ * L_power(m - 1)).trace();
    Jt_.emplace(m, v);
    return v;
  }

  /// Ktilde by its trace definition.
  T Ktilde(int m, int n) { return Jtilde(m) * F(n) - F(m) * Jtilde(n); }

  /// Ktilde through K + alpha sqrt(h) K^(1)_{m+1,n+1}.
  T Ktilde_via_flow(int m, int n) {
    const T a = lift<T>(alpha_sqrt_h<base_t<T>>(params_));
    return K(m, n) + a * Kflow(1, m + 1, n + 1);
  }

 private:
  std::vector<T> x_;
  std::vector<T> p_;
  ModelParams params_;
  SquareMatrix<T> L_;
  std::map<int, SquareMatrix<T>> powers_;
  std::map<int, T> F_;
  std::map<int, T> J_;
  std::map<int, T> Jt_;
  std::unique_ptr<SquareMatrix<T>> Y_;
};

template <class T>
T Observable::eval(EvalContext<T>& ctx) const {
  T v;
  switch (kind_) {
    case ObsKind::zero:
      return cmsym::zero<T>();
    case ObsKind::F:
      v = ctx.F(idx_[0]);
      break;
    case ObsKind::J:
      v = ctx.J(idx_[0]);
      break;
    case ObsKind::K:
      v = ctx.K(idx_[0], idx_[1]);
      break;
    case ObsKind::Kflow:
      v = ctx.Kflow(idx_[0], idx_[1], idx_[2]);
      break;
    case ObsKind::Ktilde:
      v = ctx.Ktilde(idx_[0], idx_[1]);
      break;
    case ObsKind::coord: {
      const int i = idx_[1] - 1;
      if (i < 0 || i >= ctx.N()) throw ArityError("coordinate index out of range: " + name());
      v = (idx_[0] == 0) ? ctx.x()[i] : ctx.p()[i];
      break;
    }
    case ObsKind::product:
      v = (*factors_)[0].eval(ctx) * (*factors_)[1].eval(ctx);
      break;
  }
  return sign_ < 0 ? -v : v;
}

template <class T>
T eval(const Observable& obs, const PhasePoint<T>& pt) {
  EvalContext<T> ctx(pt);
  return obs.eval(ctx);
}

/// The N(N+1)/2 generators of the model and the 2N-1 functionally independent ones.
struct GeneratorSet {
  int N = 0;
  Model model = Model::continuous;
  std::vector<Observable> members;     // F_1..F_N, then K_{m,n} ordered by (m, n)
  std::vector<Observable> fi_subset;   // F_1..F_N, G_1..G_{N-1} with G_m = K_{m+1,1}
};

GeneratorSet generator_set(int N, Model model);

/// A-vector and Y_{i,j} of the three-body example.
template <class T>
struct N3Auxiliaries {
  std::array<T, 3> A;
  std::array<std::array<T, 3>, 3> Y;
};

template <class T>
N3Auxiliaries<T> eval_N3_auxiliaries(const PhasePoint<T>& pt) {
  if (pt.N != 3) throw ArityError("auxiliaries are defined for N = 3 only");
  check_separation(pt.x);
  const T nu = lift<T>(coupling<base_t<T>>(pt.params));
  N3Auxiliaries<T> out;
  for (int i = 0; i < 3; ++i) {
    T a = pt.p[i] * pt.p[i];
    for (int j = 0; j < 3; ++j) {
      if (j == i) {
        out.Y[i][j] = zero<T>();
        continue;
      }
      T d = pt.x[i] - pt.x[j];
      a += nu * nu / (d * d);
      out.Y[i][j] = (pt.p[i] * pt.x[j] + pt.p[j] * pt.x[i]) / (d * d);
    }
    out.A[i] = a;
  }
  return out;
}

/// Degree in the momenta of an observable at a fixed configuration, found by
/// exact finite differences over p -> lambda p.
int momentum_order(const Observable& obs, const PhasePoint<GaussianRational>& pt);

/// F_j K_{n,i} - F_i K_{n,j} + F_n K_{i,j} (Ktilde in the discrete model).
template <class T>
T functional_relation_check(int i, int j, int n, EvalContext<T>& ctx, Model model) {
  auto k = [&](int a, int b) { return Observable::K(model, a, b).eval(ctx); };
  return ctx.F(j) * k(n, i) - ctx.F(i) * k(n, j) + ctx.F(n) * k(i, j);
}

template <class T>
T functional_relation_check(int i, int j, int n, const PhasePoint<T>& pt, Model model) {
  EvalContext<T> ctx(pt);
  return functional_relation_check(i, j, n, ctx, model);
}

/// F_b K_{a,0} - F_a K_{b,0} - N K_{a,b}.
template <class T>
T k0_relation_check(int a, int b, EvalContext<T>& ctx, Model model) {
  auto k = [&](int m, int n) { return Observable::K(model, m, n).eval(ctx); };
  return ctx.F(b) * k(a, 0) - ctx.F(a) * k(b, 0) - from_int<T>(ctx.N()) * k(a, b);
}

/// F_j G_{n-1} - F_1 K_{n,j} - F_n G_{j-1}, G_m = K_{m+1,1}.
template <class T>
T reduced_relation_check(int j, int n, EvalContext<T>& ctx, Model model) {
  auto k = [&](int a, int b) { return Observable::K(model, a, b).eval(ctx); };
  return ctx.F(j) * k(n, 1) - ctx.F(1) * k(n, j) - ctx.F(n) * k(j, 1);
}

}  // namespace cmsym
