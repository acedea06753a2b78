// cmsym: symmetry-algebra tables, exact verification and dynamics for the
// Calogero-Moser system and its Nijhoff-Pang discretization.
//
// Exit codes: 0 all checks hold, 1 refutation, 2 configuration error,
// 3 runtime or branch failure.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "cmsym/algebra.hpp"
#include "cmsym/checks.hpp"
#include "cmsym/dynamics.hpp"
#include "cmsym/report.hpp"

#ifdef CMSYM_HAVE_OPENMP
#include <omp.h>
#endif

using namespace cmsym;
using nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  int n = 2;
  std::string mode = "continuous";
  std::string nu = "1/2";
  std::string s = "1";
  std::string h;
  std::uint64_t seed = 1;
  int samples = 5;
  double tol = -1.0;  // command default when negative
  std::string format = "text";
  std::string out;
  std::string report;
  bool mutate = false;
  std::string kind = "map";
  int steps = 100;
  double T = 10.0;
  std::string convention = "repulsive";
  std::string grid;
  int threads = 0;
  int check_every = 1;
};

// "3", "-1/2", "0.125" -> exact rational
Rational parse_rational(const std::string& text) {
  const std::string s = text;
  try {
    auto dot = s.find('.');
    if (dot == std::string::npos) {
      Rational q(s, 10);
      q.canonicalize();
      if (q.get_den() == 0) throw ConfigError("zero denominator");
      return q;
    }
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    if (digits.empty() || digits == "-") throw ConfigError("empty number");
    Rational q(mpz_class(digits, 10));
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, s.size() - dot - 1);
    q /= den;
    q.canonicalize();
    return q;
  } catch (const std::invalid_argument&) {
    throw ConfigError("not a rational number: '" + text + "'");
  }
}

Convention parse_convention(const std::string& s) {
  if (s == "repulsive") return Convention::repulsive;
  if (s == "attractive") return Convention::attractive;
  throw ConfigError("unknown convention '" + s + "'");
}

Model model_of(const Options& o) {
  try {
    return parse_model(o.mode);
  } catch (const std::exception&) {
    throw ConfigError("mode must be continuous or discrete, got '" + o.mode + "'");
  }
}

ModelParams exact_params(const Options& o) {
  return ModelParams::exact(parse_rational(o.nu), parse_rational(o.s), parse_convention(o.convention));
}

// Float parameters: h = 2 nu s^2 unless --h is given.
ModelParams float_params(const Options& o) {
  const double nu = parse_rational(o.nu).get_d();
  double h;
  if (!o.h.empty()) {
    h = parse_rational(o.h).get_d();
  } else {
    const double s = parse_rational(o.s).get_d();
    h = 2.0 * nu * s * s;
  }
  return ModelParams::floating(nu, h, parse_convention(o.convention));
}

ordered_json config_echo(const std::string& cmd, const Options& o) {
  ordered_json c;
  c["command"] = cmd;
  c["n"] = o.n;
  c["mode"] = o.mode;
  c["nu"] = o.nu;
  c["s"] = o.s;
  if (!o.h.empty()) c["h"] = o.h;
  c["convention"] = o.convention;
  c["seed"] = o.seed;
  c["samples"] = o.samples;
  c["tol"] = o.tol;
  c["format"] = o.format;
  if (cmd == "verify") c["mutate"] = o.mutate;
  if (cmd == "simulate") {
    c["kind"] = o.kind;
    c["steps"] = o.steps;
    c["T"] = o.T;
    c["check_every"] = o.check_every;
  }
  if (cmd == "limit-scan") c["grid"] = o.grid;
  return c;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  f << content;
  if (!f) throw IoError("write failed: '" + path + "'");
}

// Primary output goes to --out, or stdout without it.
void emit(const Options& o, const std::string& content) {
  if (o.out.empty()) {
    std::cout << content;
  } else {
    write_file(o.out, content);
  }
}

std::string render_report(const Report& r, const std::string& format) {
  if (format == "json") return r.to_json().dump(2) + "\n";
  if (format == "csv") {
    std::ostringstream os;
    os << "group,name,verdict,max_residual\n";
    for (const auto& c : r.to_json()["checks"]) {
      os << c["group"].get<std::string>() << ",\"" << c["name"].get<std::string>() << "\","
         << c["verdict"].get<std::string>() << ",";
      if (c.contains("max_residual")) os << c["max_residual"].get<double>();
      else if (c.contains("value")) os << c["value"].get<double>();
      os << "\n";
    }
    return os.str();
  }
  return r.to_text();
}

void finish(Report& r, const Options& o, double seconds, bool primary_is_report) {
  r.set_timing(seconds);
  if (!o.report.empty()) write_file(o.report, r.to_json().dump(2) + "\n");
  if (primary_is_report) emit(o, render_report(r, o.format));
  else if (o.report.empty()) std::cerr << r.to_text();
}

double elapsed(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string table_csv(const BracketTable& t) {
  std::ostringstream os;
  os << "a,b,value\n";
  for (const auto& e : t.entries) os << e.a.name() << "," << e.b.name() << ",\"" << e.value.str() << "\"\n";
  return os.str();
}

ordered_json generators_json(const BracketTable& t) {
  ordered_json g;
  g["schema"] = "cmsym-generators/1";
  g["naming"] = kNamingConvention;
  g["N"] = t.N;
  g["mode"] = to_string(t.model);
  ordered_json list = ordered_json::array();
  for (const auto& v : t.generators) {
    ordered_json e;
    e["name"] = v.name();
    e["graded_degree"] = v.graded_weight();
    if (v.kind == VarKind::F) {
      e["definition"] = "tr L^" + std::to_string(v.m);
    } else if (v.kind == VarKind::K) {
      e["definition"] = "J" + std::to_string(v.m) + " F" + std::to_string(v.n) + " - J" + std::to_string(v.n) +
                        " F" + std::to_string(v.m) + ", J_k = tr(X L^(k-1))";
    } else {
      e["definition"] = "Jt" + std::to_string(v.m) + " F" + std::to_string(v.n) + " - F" + std::to_string(v.m) +
                        " Jt" + std::to_string(v.n) + ", Jt_k = tr(X (1 - h/c0 L) L^(k-1))";
    }
    list.push_back(e);
  }
  g["generators"] = list;
  return g;
}

void require_table_n(int n) {
  if (n < 2) throw ConfigError("tables need --n >= 2");
  if (n > 12) throw ConfigError("--n above 12 is not supported");
}

BracketTable make_table(const Options& o, Report& r) {
  require_table_n(o.n);
  BracketTable t = build_table(o.n, model_of(o));
  r.set_result("degree", t.degree);
  r.set_result("graded_degree", t.graded_degree);
  r.set_result("entries", t.entries.size());
  r.set_result("ideal", ideal_check(t));
  return t;
}

int cmd_table(const Options& o) {
  auto t0 = std::chrono::steady_clock::now();
  Report r("table", config_echo("table", o));
  BracketTable t = make_table(o, r);
  if (o.format == "json") emit(o, table_to_json(t).dump(2) + "\n");
  else if (o.format == "csv") emit(o, table_csv(t));
  else emit(o, table_to_text(t));
  finish(r, o, elapsed(t0), false);
  return r.exit_code();
}

int cmd_export(const Options& o) {
  if (o.out.empty()) throw ConfigError("export needs --out <directory>");
  auto t0 = std::chrono::steady_clock::now();
  Report r("export", config_echo("export", o));
  BracketTable t = make_table(o, r);
  std::error_code ec;
  std::filesystem::create_directories(o.out, ec);
  if (ec) throw IoError("cannot create directory '" + o.out + "': " + ec.message());
  const std::filesystem::path dir(o.out);
  write_file((dir / "table.json").string(), table_to_json(t).dump(2) + "\n");
  write_file((dir / "table.txt").string(), table_to_text(t));
  write_file((dir / "generators.json").string(), generators_json(t).dump(2) + "\n");
  r.set_result("files", {"table.json", "table.txt", "generators.json", "report.json"});
  r.set_timing(elapsed(t0));
  write_file((dir / "report.json").string(), r.to_json().dump(2) + "\n");
  std::cout << "wrote " << o.out << "/{table.json,table.txt,generators.json,report.json}\n";
  return r.exit_code();
}

int cmd_verify(const Options& o) {
  auto t0 = std::chrono::steady_clock::now();
  require_table_n(o.n);
  if (o.samples < 1) throw ConfigError("--samples must be positive");
  const Model model = model_of(o);
  CheckConfig cfg;
  cfg.params = exact_params(o);
  cfg.seed = o.seed;
  cfg.samples = o.samples;

  Report r("verify", config_echo("verify", o));
  BracketTable t = build_table(o.n, model);
  r.set_result("degree", t.degree);
  r.set_result("graded_degree", t.graded_degree);
  if (o.mutate) t = mutate_table(t);
  r.add_checks("table", check_table_pointwise(t, cfg));
  r.add_checks("auxiliary", check_auxiliary_identities(o.n, cfg));
  r.add_checks("functional", check_functional_relations(o.n, model, cfg));
  if (model == Model::discrete) r.add_checks("ktilde", check_ktilde_decomposition(o.n, cfg));
  finish(r, o, elapsed(t0), true);
  return r.exit_code();
}

ordered_json drift_json(const Trajectory& tr) {
  ordered_json d = ordered_json::object();
  for (const auto& e : tr.drift) d[e.name] = {{"max_rel", e.max_rel}, {"expected_conserved", e.expected_conserved}};
  return d;
}

int cmd_simulate(const Options& o) {
  auto t0 = std::chrono::steady_clock::now();
  if (o.n < 1) throw ConfigError("--n must be positive");
  Report r("simulate", config_echo("simulate", o));
  Trajectory tr;
  if (o.kind == "flow") {
    Options fo = o;
    if (o.h.empty() && o.s == "1") fo.s = "0";  // the flow has no lattice unless asked
    ModelParams prm = float_params(fo);
    FlowConfig fc;
    fc.T = o.T;
    fc.tol = o.tol > 0 ? o.tol : 1e-12;
    if (!(fc.T > 0)) throw ConfigError("--T must be positive");
    tr = hamiltonian_flow(dynamics_start(o.n, prm, o.seed), fc);
    r.add_metric("max conserved drift", tr.max_drift(), 1e-9, tr.max_drift() < 1e-9);
    r.add_metric("J_k(t) - J_k(0) - t F_k", tr.linear_J_residual, 1e-8, tr.linear_J_residual < 1e-8);
    r.set_result("accepted_steps", tr.accepted);
    r.set_result("rejected_steps", tr.rejected);
  } else if (o.kind == "map") {
    ModelParams prm = float_params(o);
    if (o.steps < 1) throw ConfigError("--steps must be positive");
    MapConfig mc;
    mc.steps = o.steps;
    mc.newton.tol = o.tol > 0 ? o.tol : 1e-13;
    mc.check_every = std::max(o.check_every, 1);
    tr = iterate_map(dynamics_start(o.n, prm, o.seed), mc);
    r.add_metric("max conserved drift", tr.max_drift(), 1e-8, tr.max_drift() < 1e-8);
    r.add_metric("isospectral residual", tr.isospectral_residual, 1e-10, tr.isospectral_residual < 1e-10);
    r.add_metric("Lax residual", tr.lax_residual, 1e-10, tr.lax_residual < 1e-10);
    r.add_metric("symplectic residual", tr.symplectic_residual, 1e-8, tr.symplectic_residual < 1e-8);
    r.add_metric("X-problem trace residual", tr.x_problem_residual, 1e-10, tr.x_problem_residual < 1e-10);
    r.set_result("x_problem_matrix_residual", tr.x_problem_matrix);
    r.set_result("newton_iterations", tr.accepted);
    r.set_result("max_imag_F", tr.max_imag_F);
  } else {
    throw ConfigError("--kind must be flow or map");
  }
  r.set_result("drift", drift_json(tr));
  if (!o.out.empty()) write_file(o.out, trajectory_csv(tr));
  r.set_timing(elapsed(t0));
  if (!o.report.empty()) write_file(o.report, r.to_json().dump(2) + "\n");
  std::cout << render_report(r, o.format);
  return r.exit_code();
}

std::vector<Rational> parse_grid(const std::string& g) {
  if (g.empty()) return default_s_grid();
  std::vector<Rational> out;
  std::stringstream ss(g);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    Rational q = parse_rational(item);
    if (sgn(q) < 0) throw ConfigError("grid values must be non-negative");
    out.push_back(q);
  }
  if (out.empty()) throw ConfigError("empty --grid");
  return out;
}

int cmd_limit_scan(const Options& o) {
  auto t0 = std::chrono::steady_clock::now();
  if (o.n != 2) throw ConfigError("limit-scan is defined for --n 2");
  const Rational nu = parse_rational(o.nu);
  ModelParams::exact(nu, Rational(1));  // validates nu
  LimitScan scan = continuum_limit_scan(nu, parse_grid(o.grid), o.seed);
  Report r("limit-scan", config_echo("limit-scan", o));
  const double tol = o.tol > 0 ? o.tol : 0.01;
  r.add_metric("log-log slope of |{F2,Kt21}| vs h", scan.slope, 0.5, std::abs(scan.slope - 0.5) <= tol);
  Verdict v;
  v.name = "{F2,Kt21} - a (F1^2 - 2F2)(F1^2 - F2) = 0 on the grid";
  v.samples = static_cast<int>(scan.rows.size());
  if (!scan.residuals_zero) {
    v.kind = VerdictKind::refuted;
    v.diagnostic = "nonzero exact residual";
  }
  r.add_checks("closed-form", {v});
  ordered_json rows = ordered_json::array();
  for (const auto& row : scan.rows)
    rows.push_back({{"s", rational_str(row.s)}, {"h", row.h}, {"bracket", row.bracket.str()},
                    {"magnitude", row.magnitude}, {"residual", row.residual.str()}});
  r.set_result("rows", rows);
  r.set_result("slope", scan.slope);
  if (!o.out.empty()) write_file(o.out, scan_csv(scan));
  r.set_timing(elapsed(t0));
  if (!o.report.empty()) write_file(o.report, r.to_json().dump(2) + "\n");
  std::cout << render_report(r, o.format);
  return r.exit_code();
}

void add_common(CLI::App* sc, Options& o) {
  sc->add_option("--n", o.n, "number of particles N");
  sc->add_option("--mode", o.mode, "continuous | discrete")->check(CLI::IsMember({"continuous", "discrete"}));
  sc->add_option("--nu", o.nu, "coupling nu (rational, default 1/2)");
  sc->add_option("--s", o.s, "lattice parameter s, h = 2 nu s^2 (default 1)");
  sc->add_option("--h", o.h, "lattice spacing h (float mode; overrides --s)");
  sc->add_option("--convention", o.convention, "repulsive | attractive (nu -> i nu)");
  sc->add_option("--seed", o.seed, "sampler seed");
  sc->add_option("--samples", o.samples, "random points per identity");
  sc->add_option("--tol", o.tol, "tolerance (float checks, flow/Newton, slope)");
  sc->add_option("--format", o.format, "json | csv | text")->check(CLI::IsMember({"json", "csv", "text"}));
  sc->add_option("--out", o.out, "output path");
  sc->add_option("--report", o.report, "also write the JSON report here");
  sc->add_option("--threads", o.threads, "worker threads (0: runtime default)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cmsym: Calogero-Moser symmetry algebras, verification and dynamics"};
  app.require_subcommand(1);
  app.set_help_flag("--help", "print this help and exit");
  Options o;

  auto* table = app.add_subcommand("table", "build the closed bracket table");
  add_common(table, o);
  auto* verify = app.add_subcommand("verify", "check the table and identities at random exact points");
  add_common(verify, o);
  verify->add_flag("--mutate", o.mutate, "negative control: perturb {F1,K21}");
  auto* simulate = app.add_subcommand("simulate", "integrate the flow or iterate the map");
  add_common(simulate, o);
  simulate->add_option("--kind", o.kind, "flow | map")->check(CLI::IsMember({"flow", "map"}));
  simulate->add_option("--steps", o.steps, "map steps");
  simulate->add_option("--T", o.T, "flow duration");
  simulate->add_option("--check-every", o.check_every, "map steps between Lax/symplectic checks");
  auto* scan = app.add_subcommand("limit-scan", "h -> 0 scan of {F2,Kt21}");
  add_common(scan, o);
  scan->add_option("--grid", o.grid, "comma-separated s values");
  auto* exp = app.add_subcommand("export", "write table.json, table.txt, generators.json to --out");
  add_common(exp, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

#ifdef CMSYM_HAVE_OPENMP
  if (o.threads > 0) omp_set_num_threads(o.threads);
#endif

  try {
    if (*table) return cmd_table(o);
    if (*verify) return cmd_verify(o);
    if (*simulate) return cmd_simulate(o);
    if (*scan) return cmd_limit_scan(o);
    if (*exp) return cmd_export(o);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ArityError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ConventionError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const UnsupportedParameterError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ParseError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitConfig;
}
