#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "cmsym/dynamics.hpp"
#include "testing.hpp"

using namespace cmsym;

TEST_CASE("seeded start is reproducible and ordered") {
  auto prm = ModelParams::floating(0.5, 1.0);
  auto a = dynamics_start(3, prm, 1), b = dynamics_start(3, prm, 1), c = dynamics_start(3, prm, 2);
  CHECK(a.x == b.x);
  CHECK(a.p == b.p);
  CHECK(a.x != c.x);
  for (int k = 0; k < 3; ++k) {
    CHECK(std::abs(a.x[k].real() - 2.0 * k) <= 0.5);
    CHECK(std::abs(a.p[k].real()) <= 1.0);
  }
}

TEST_CASE("flow conserves the generators, J grows linearly") {
  FlowConfig fc;
  fc.T = 5.0;
  for (int N : {2, 3}) {
    auto tr = hamiltonian_flow(dynamics_start(N, ModelParams::floating(0.5, 0.0), 1), fc);
    CHECK(tr.max_drift() < 1e-9);
    CHECK(tr.linear_J_residual < 1e-8);
    CHECK(tr.accepted > 0);
    CHECK(tr.find("K21").max_rel < 1e-9);
  }
}

TEST_CASE("Ktilde is not conserved by the flow at h = 1") {
  FlowConfig fc;
  fc.T = 5.0;
  auto tr = hamiltonian_flow(dynamics_start(2, ModelParams::floating(0.5, 1.0), 1), fc);
  CHECK(tr.find("Kt21").max_rel > 1e-3);
  CHECK(tr.find("F2").max_rel < 1e-9);
}

TEST_CASE("flow detects collisions") {
  // start inside the separation guard
  PhasePoint<ComplexFloat> pt({0.0, 1.0}, {0.0, 0.0}, ModelParams::floating(0.5, 0.0));
  FlowConfig fc;
  fc.min_separation = 2.0;
  CHECK_THROWS_AS(hamiltonian_flow(pt, fc), CollisionError);
}

TEST_CASE("map conserves F and Ktilde, not K") {
  MapConfig mc;
  mc.steps = 40;
  for (int N : {2, 3}) {
    auto tr = iterate_map(dynamics_start(N, ModelParams::floating(0.5, 1.0), 1), mc);
    for (const auto& d : tr.drift) {
      INFO(d.name);
      if (d.expected_conserved) CHECK(d.max_rel < 1e-8);
    }
    CHECK(tr.find("K21").max_rel > 1e-3);
    CHECK(tr.isospectral_residual < 1e-10);
    CHECK(tr.lax_residual < 1e-10);
    CHECK(tr.x_problem_residual < 1e-10);
    CHECK(tr.symplectic_residual < 1e-8);
    CHECK(tr.max_imag_F < 1e-8);
  }
}

TEST_CASE("matrix X-problem residual is the rank-one term") {
  auto pt = dynamics_start(3, ModelParams::floating(0.5, 1.0), 1);
  auto step = np_map(pt);
  auto r = x_problem_residual(pt, step);
  CHECK(r.trace < 1e-10);
  CHECK(r.matrix > 1e-3);
}

TEST_CASE("a step solves both equation sets") {
  auto pt = dynamics_start(3, ModelParams::floating(0.5, 1.0), 4);
  auto step = np_map(pt);
  double res = 0.0;
  for (auto v : map_residual(pt, step.xbar)) res = std::max(res, std::abs(v));
  CHECK(res < 1e-12);
  auto pb = map_momenta(pt, step.xbar);
  for (int k = 0; k < 3; ++k) CHECK(std::abs(pb[k] - step.pbar[k]) < 1e-14);
  CHECK(step.newton_iters > 0);
}

TEST_CASE("small h continues the identity") {
  auto base = dynamics_start(2, ModelParams::floating(0.5, 1.0), 1);
  for (double h : {1e-3, 1e-5}) {
    PhasePoint<ComplexFloat> pt(base.x, base.p, ModelParams::floating(0.5, h));
    auto step = np_map(pt);
    for (int k = 0; k < 2; ++k) {
      CHECK(std::abs(step.xbar[k] - pt.x[k]) < 10 * h);
      CHECK(std::abs(step.pbar[k] - pt.p[k]) < 10 * h);
    }
  }
  PhasePoint<ComplexFloat> zero(base.x, base.p, ModelParams::floating(0.5, 0.0));
  auto step = np_map(zero);
  for (int k = 0; k < 2; ++k) {
    CHECK(step.xbar[k] == zero.x[k]);
    CHECK(step.pbar[k] == zero.p[k]);
  }
}

TEST_CASE("analytic Jacobian matches finite differences and is symplectic") {
  auto pt = dynamics_start(3, ModelParams::floating(0.5, 1.0), 1);
  auto step = np_map(pt);
  auto D = map_jacobian(pt, step);
  auto Dfd = map_jacobian_fd(pt);
  CHECK((D - Dfd).max_abs() < 1e-7);
  CHECK(symplectic_defect(D) < 1e-10);
  // a non-symplectic matrix is flagged
  auto S = D;
  S(0, 0) *= 1.01;
  CHECK(symplectic_defect(S) > 1e-4);
}

TEST_CASE("map approaches the flow as h -> 0") {
  auto ord = map_flow_order(dynamics_start(2, ModelParams::floating(0.5, 0.0), 1), {1e-2, 5e-3, 2.5e-3, 1.25e-3});
  REQUIRE(ord.deviation.size() == 4u);
  for (std::size_t i = 1; i < ord.deviation.size(); ++i) CHECK(ord.deviation[i] < ord.deviation[i - 1]);
  CHECK(ord.slope > 1.0);
}

TEST_CASE("continuum-limit scan") {
  auto scan = continuum_limit_scan(Rational(1, 2), default_s_grid(), 1);
  CHECK(scan.residuals_zero);
  CHECK(std::abs(scan.slope - 0.5) < 0.01);
  REQUIRE(!scan.rows.empty());
  bool saw_zero = false;
  for (const auto& r : scan.rows) {
    CHECK(r.residual.is_zero());
    if (r.s == 0) {
      saw_zero = true;
      CHECK(r.bracket.is_zero());
    }
  }
  CHECK(saw_zero);
  auto serial = continuum_limit_scan_serial(Rational(1, 2), default_s_grid(), 1);
  CHECK(scan_csv(serial) == scan_csv(scan));
  CHECK(scan_csv(scan).rfind("s,h,", 0) == 0);
}

TEST_CASE("log-log slope fit") {
  CHECK(std::abs(loglog_slope({1, 10, 100}, {3, 30, 300}) - 1.0) < 1e-12);
  CHECK(std::abs(loglog_slope({1, 4, 16}, {1, 2, 4}) - 0.5) < 1e-12);
}

TEST_CASE("trajectory csv") {
  MapConfig mc;
  mc.steps = 3;
  auto tr = iterate_map(dynamics_start(2, ModelParams::floating(0.5, 1.0), 1), mc);
  std::string csv = trajectory_csv(tr);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);  // header + 4 samples
  CHECK(csv.find("Kt21") != std::string::npos);
}
