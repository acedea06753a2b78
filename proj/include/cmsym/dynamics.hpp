#pragma once

// Time evolution in floating point: the Calogero-Moser Hamiltonian flow and
// the Nijhoff-Pang map, with invariant monitoring and Lax-pair residuals.
// The continuum-limit scan is exact.

#include <cstdint>
#include <string>
#include <vector>

#include "cmsym/observables.hpp"
#include "cmsym/phase.hpp"
#include "cmsym/scalar.hpp"

namespace cmsym {

using FloatPoint = PhasePoint<ComplexFloat>;

/// Seeded generic start: x_k = 2k + U(-1/2, 1/2), p_k = U(-1, 1).
FloatPoint dynamics_start(int N, const ModelParams& params, std::uint64_t seed);

struct DriftEntry {
  std::string name;
  ComplexFloat initial{};
  double max_rel = 0.0;  // max_t |I(t) - I(0)| / max(|I(0)|, 1)
  bool expected_conserved = true;
};

struct TrajectorySample {
  double t = 0.0;
  std::vector<ComplexFloat> x;
  std::vector<ComplexFloat> p;
  std::vector<ComplexFloat> invariants;
};

struct Trajectory {
  int N = 0;
  std::string kind;  // "flow" or "map"
  std::vector<DriftEntry> drift;
  std::vector<TrajectorySample> samples;
  // flow: max_k |J_k(t) - J_k(0) - t F_k| / max(|J_k(0)|, |t F_k|, 1)
  double linear_J_residual = 0.0;
  // flow: accepted / rejected steps; map: total Newton iterations
  long accepted = 0;
  long rejected = 0;
  // map diagnostics, max over the checked steps
  double isospectral_residual = 0.0;
  double lax_residual = 0.0;
  double x_problem_residual = 0.0;  // trace form
  double x_problem_matrix = 0.0;
  double symplectic_residual = 0.0;
  double max_imag_F = 0.0;

  double max_drift(bool conserved_only = true) const;
  const DriftEntry& find(const std::string& name) const;
};

/// Names and values of the monitored invariants: F_1..F_N, K_{m,n}, and
/// Ktilde_{m,n} when h > 0.
std::vector<std::string> invariant_names(int N, bool with_tilde);
std::vector<ComplexFloat> invariant_values(const FloatPoint& pt, bool with_tilde);

struct FlowConfig {
  double T = 10.0;
  double tol = 1e-12;
  double h0 = 1e-3;
  double min_separation = 1e-6;
  int record_every = 1;  // accepted steps between recorded samples
  long max_steps = 10000000;
};

/// xdot = p, pdot_i = 2 nu^2 sum_k (x_i - x_k)^-3, Dormand-Prince 5(4) with
/// PI step control. Throws CollisionError near a collision.
Trajectory hamiltonian_flow(const FloatPoint& start, const FlowConfig& cfg);

struct NewtonConfig {
  double tol = 1e-13;
  int max_iter = 60;
};

struct MapStepResult {
  std::vector<ComplexFloat> xbar;
  std::vector<ComplexFloat> pbar;
  int newton_iters = 0;
  double residual = 0.0;
};

/// Residual of the first defining equation set at xbar (length N).
std::vector<ComplexFloat> map_residual(const FloatPoint& pt, const std::vector<ComplexFloat>& xbar);
/// pbar from the second defining equation set.
std::vector<ComplexFloat> map_momenta(const FloatPoint& pt, const std::vector<ComplexFloat>& xbar);

/// One step of the Nijhoff-Pang correspondence on the branch continued from
/// xbar = x + h p. At h = 0 the step is the identity. Throws BranchFailure on
/// non-convergence.
MapStepResult np_map(const FloatPoint& pt, const NewtonConfig& cfg = {});

struct IsospectralResidual {
  double traces = 0.0;  // max_k |tr Lbar^k - tr L^k| / max(|tr L^k|, 1)
  double lax = 0.0;     // |Lbar Mt - Mt L| / max(|Mt| |L|, 1)
};

IsospectralResidual check_isospectral(const FloatPoint& pt, const MapStepResult& step);

struct XProblemResidual {
  // |Xbar Mt - Mt X - h Mt L (1 - h c0^-1 L)^-1|, scaled like the Lax residual.
  // Xbar Mt - Mt X = c0 (E - Mt) with E the all-ones matrix, so for N >= 2
  // this does not vanish; it is reported as a diagnostic.
  double matrix = 0.0;
  // max_m |Jt_m(xbar, pbar) - Jt_m(x, p) - h F_m| / max(|Jt_m|, |h F_m|, 1),
  // m = 0..2N: the trace form that Ktilde conservation rests on.
  double trace = 0.0;
};

XProblemResidual x_problem_residual(const FloatPoint& pt, const MapStepResult& step);

/// Jacobian of (x, p) -> (xbar, pbar), 2N x 2N, by implicit differentiation.
SquareMatrix<ComplexFloat> map_jacobian(const FloatPoint& pt, const MapStepResult& step);
/// Central finite differences of np_map (cross-check).
SquareMatrix<ComplexFloat> map_jacobian_fd(const FloatPoint& pt, double eps = 1e-6, const NewtonConfig& cfg = {});
/// max |D^T Omega D - Omega|.
double symplectic_defect(const SquareMatrix<ComplexFloat>& D);
double check_symplectic(const FloatPoint& pt, const NewtonConfig& cfg = {});

struct MapConfig {
  int steps = 100;
  NewtonConfig newton;
  int check_every = 1;  // steps between isospectral/symplectic checks
  int record_every = 1;
};

/// Iterates np_map; time is step * h.
Trajectory iterate_map(const FloatPoint& start, const MapConfig& cfg);

/// Rate at which one map step matches the time-h flow of the rescaled
/// system: the fitted exponent of the one-step deviation in h.
struct OrderEstimate {
  std::vector<double> h;
  std::vector<double> deviation;
  double slope = 0.0;
};
OrderEstimate map_flow_order(const FloatPoint& start, const std::vector<double>& h_grid);

struct ScanRow {
  Rational s;
  double h = 0.0;
  GaussianRational bracket;   // {F2, Kt21} at the fixed point
  GaussianRational residual;  // bracket - a (F1^2 - 2F2)(F1^2 - F2)
  double magnitude = 0.0;
};

struct LimitScan {
  int N = 2;
  std::vector<ScanRow> rows;
  double slope = 0.0;  // log|bracket| vs log h over rows with s > 0
  bool residuals_zero = true;
};

/// Default grid: s = 1, 1/2, ..., 1/512 and 1/1000 (h = 2 nu s^2), plus s = 0.
std::vector<Rational> default_s_grid();

/// N = 2 continuum-limit scan at the sample point (seed, index 0). The
/// parallel version runs grid points as independent jobs.
LimitScan continuum_limit_scan(const Rational& nu, const std::vector<Rational>& s_grid, std::uint64_t seed);
LimitScan continuum_limit_scan_serial(const Rational& nu, const std::vector<Rational>& s_grid, std::uint64_t seed);

/// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

std::string trajectory_csv(const Trajectory& tr);
std::string scan_csv(const LimitScan& scan);

}  // namespace cmsym
