// Acceptance run: one PASS/FAIL line per criterion, at the published
// tolerances and time budgets. Exit status is the number of failures.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "cmsym/algebra.hpp"
#include "cmsym/checks.hpp"
#include "cmsym/dynamics.hpp"
#include "cmsym/symfun.hpp"
#include "testing.hpp"

using namespace cmsym;
using GR = GaussianRational;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

int failures = 0;

void criterion(int id, const std::string& title, double budget_s, const std::function<void(Outcome&)>& body) {
  Outcome o;
  auto t0 = std::chrono::steady_clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail << " [exception: " << e.what() << "]";
  }
  const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  o.require(dt < budget_s, "runtime above " + std::to_string(budget_s) + " s");
  if (!o.pass) ++failures;
  std::printf("%s %2d %s (%.2f s)%s\n", o.pass ? "PASS" : "FAIL", id, title.c_str(), dt, o.detail.str().c_str());
  std::fflush(stdout);
}

// table agrees with every golden relation and has no extra entries
void golden_table(Outcome& o, const BracketTable& t, const std::string& file) {
  auto lines = testing::load_golden(file);
  o.require(lines.size() == t.entries.size(), file + ": entry count");
  for (const auto& g : lines) {
    auto [a, b] = testing::bracket_pair(g.lhs);
    o.require(t.bracket(a, b) == g.rhs, file + " " + g.lhs);
  }
}

void golden_closures(Outcome& o, int N, Model model, const std::string& file) {
  AlgebraContext ctx(N, model);
  for (const auto& g : testing::load_golden(file)) {
    Observable obs = Observable::parse(g.lhs);
    PolyExpr got = obs.kind() == ObsKind::F ? ctx.reduce_F(obs.idx()[0]) : ctx.reduce_K(obs.idx()[0], obs.idx()[1]);
    o.require(got == g.rhs, file + " " + g.lhs);
  }
}

CheckConfig config_for(Model m) {
  CheckConfig cfg;
  cfg.samples = 5;
  cfg.seed = 1;
  cfg.params = ModelParams::exact(Rational(1, 2), m == Model::continuous ? Rational(0) : Rational(1));
  return cfg;
}

void count_verdicts(Outcome& o, const std::vector<Verdict>& vs, const std::string& label, int& total) {
  for (const auto& v : vs) {
    ++total;
    o.require(v.holds(), label + " " + v.name);
  }
}

}  // namespace

int main() {
  std::printf("acceptance: nu = 1/2, s = 1 (h = 1), seed 1\n");

  criterion(1, "N=2 continuous table", 1.0, [](Outcome& o) {
    golden_table(o, build_table(2, Model::continuous), "n2_continuous.txt");
  });

  criterion(2, "N=3 continuous table and closures", 10.0, [](Outcome& o) {
    golden_table(o, build_table(3, Model::continuous), "n3_continuous.txt");
    golden_closures(o, 3, Model::continuous, "n3_continuous_closures.txt");
  });

  criterion(3, "N=2, N=3 discrete tables and closures, a = (1+i)s", 60.0, [](Outcome& o) {
    golden_table(o, build_table(2, Model::discrete), "n2_discrete.txt");
    golden_table(o, build_table(3, Model::discrete), "n3_discrete.txt");
    golden_closures(o, 3, Model::discrete, "n3_discrete_closures.txt");
  });

  criterion(4, "table degrees 2 / 2N-1 continuous, 2N discrete", 600.0, [](Outcome& o) {
    for (int N = 2; N <= 5; ++N) {
      const int dc = build_table(N, Model::continuous).degree;
      const int dd = build_table(N, Model::discrete).degree;
      o.detail << " N" << N << ":" << dc << "/" << dd;
      o.require(dc == (N == 2 ? 2 : 2 * N - 1), "continuous degree N=" + std::to_string(N));
      o.require(dd == 2 * N, "discrete degree N=" + std::to_string(N));
    }
  });

  criterion(5, "table entries equal canonical brackets at 5 exact points, N=2..5", 1800.0, [](Outcome& o) {
    int total = 0;
    for (int N = 2; N <= 5; ++N)
      for (Model m : {Model::continuous, Model::discrete})
        count_verdicts(o, check_table_pointwise(build_table(N, m), config_for(m)), "N=" + std::to_string(N), total);
    o.detail << " " << total << " entries";
  });

  criterion(6, "auxiliary identities and functional relations, N<=5", 1800.0, [](Outcome& o) {
    int total = 0;
    for (int N = 2; N <= 5; ++N) {
      auto cfg = config_for(Model::discrete);
      count_verdicts(o, check_auxiliary_identities(N, cfg), "aux N=" + std::to_string(N), total);
      for (Model m : {Model::continuous, Model::discrete})
        count_verdicts(o, check_functional_relations(N, m, config_for(m)), "funcrel N=" + std::to_string(N), total);
      // {J1, F1} = N explicitly
      auto pt = sample_point(N, cfg.params, cfg.sampler, cfg.seed, 0);
      o.require(bracket(Observable::J(1), Observable::F(1), pt) == GR(N), "{J1,F1} = N");
    }
    o.detail << " " << total << " identities";
  });

  criterion(7, "discrete tables at s = 0 equal the continuous tables, N=2..5", 600.0, [](Outcome& o) {
    for (int N = 2; N <= 5; ++N) {
      auto diff = compare_tables(contract_to_continuous(build_table(N, Model::discrete)), build_table(N, Model::continuous));
      o.require(diff.empty(), "N=" + std::to_string(N) + " differs");
    }
  });

  criterion(8, "flow over T=10: drift < 1e-9, J linear residual < 1e-8", 600.0, [](Outcome& o) {
    for (int N : {2, 3}) {
      FlowConfig fc;
      fc.T = 10.0;
      auto tr = hamiltonian_flow(dynamics_start(N, ModelParams::floating(0.5, 0.0), 1), fc);
      o.detail << " N" << N << ": drift " << tr.max_drift() << ", J " << tr.linear_J_residual;
      o.require(tr.max_drift() < 1e-9, "drift N=" + std::to_string(N));
      o.require(tr.linear_J_residual < 1e-8, "J residual N=" + std::to_string(N));
    }
  });

  criterion(9, "map, 100 steps at h=1: F/Kt drift < 1e-8, K drift > 1e-3, iso < 1e-10, symp < 1e-8", 600.0,
            [](Outcome& o) {
              for (int N : {2, 3}) {
                MapConfig mc;
                mc.steps = 100;
                mc.newton.tol = 1e-13;
                auto tr = iterate_map(dynamics_start(N, ModelParams::floating(0.5, 1.0), 1), mc);
                double k_drift = 1e300;
                for (const auto& d : tr.drift)
                  if (!d.expected_conserved) k_drift = std::min(k_drift, d.max_rel);
                o.detail << " N" << N << ": drift " << tr.max_drift() << ", K " << k_drift << ", iso "
                         << tr.isospectral_residual << ", symp " << tr.symplectic_residual;
                const std::string n = " N=" + std::to_string(N);
                o.require(tr.max_drift() < 1e-8, "conserved drift" + n);
                o.require(k_drift > 1e-3, "continuous K drift" + n);
                o.require(tr.isospectral_residual < 1e-10, "isospectral" + n);
                o.require(tr.symplectic_residual < 1e-8, "symplectic" + n);
              }
            });

  criterion(10, "continuum limit: slope 0.50 +- 0.01 over h in [1e-6, 1], exact residual zero", 600.0,
            [](Outcome& o) {
              auto scan = continuum_limit_scan(Rational(1, 2), default_s_grid(), 1);
              double hmin = 1e300, hmax = 0;
              for (const auto& r : scan.rows)
                if (r.h > 0) {
                  hmin = std::min(hmin, r.h);
                  hmax = std::max(hmax, r.h);
                }
              o.detail << " slope " << scan.slope << ", h in [" << hmin << ", " << hmax << "], " << scan.rows.size()
                       << " points";
              o.require(std::abs(scan.slope - 0.5) <= 0.01, "slope");
              o.require(scan.residuals_zero, "closed-form residual");
              o.require(hmin <= 1e-6 * (1 + 1e-12) && hmax >= 1.0, "grid range");
            });

  criterion(11, "symmetric-function kernel against brute force and direct traces, N<=6", 60.0, [](Outcome& o) {
    std::mt19937_64 rng(1);
    int cases = 0;
    for (int n = 1; n <= 6; ++n) {
      for (int t = 0; t < 10; ++t) {
        std::vector<GR> v(n);
        for (auto& z : v) z = testing::random_gr(rng);
        std::vector<GR> f;
        for (int k = 1; k <= n; ++k) {
          GR s(0);
          for (const auto& z : v) s += z.pow(k);
          f.push_back(s);
        }
        // brute-force e_k over subsets
        std::vector<GR> e(n + 1, GR(0));
        for (unsigned mask = 0; mask < (1u << n); ++mask) {
          GR prod(1);
          int k = 0;
          for (int i = 0; i < n; ++i)
            if (mask & (1u << i)) {
              prod *= v[i];
              ++k;
            }
          e[k] += prod;
        }
        auto newton = symfun::newton_elementary<GR>(f, n);
        for (int k = 1; k <= n; ++k) {
          o.require(newton[k - 1] == e[k], "newton e_k");
          o.require(symfun::elementary_via_bell<GR>(k, f) == e[k], "bell e_k");
          ++cases;
        }

        SquareMatrix<GR> A(n);
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) A(i, j) = testing::random_gr(rng, 5, 3);
        std::vector<GR> tr;
        SquareMatrix<GR> P = A;
        for (int k = 1; k <= 2 * n; ++k) {
          tr.push_back(P.trace());
          P = P * A;
        }
        for (int s = 1; s <= n; ++s) {
          o.require(symfun::trace_reduce<GR>(n, tr, s) == tr[n + s - 1], "trace_reduce");
          ++cases;
        }
      }
    }
    o.detail << " " << cases << " cases";
  });

  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
