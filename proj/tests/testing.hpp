#pragma once

// Shared helpers for the unit tests: seeded exact random values and the
// golden-relation loader.

#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "cmsym/algebra.hpp"
#include "cmsym/gaussian_rational.hpp"

#ifndef CMSYM_GOLDEN_DIR
#define CMSYM_GOLDEN_DIR "tests/golden"
#endif

namespace cmsym::testing {

inline Rational random_rational(std::mt19937_64& rng, long bound = 9, long den = 6) {
  std::uniform_int_distribution<long> num(-bound, bound), d(1, den);
  Rational q(num(rng), d(rng));
  q.canonicalize();
  return q;
}

inline GaussianRational random_gr(std::mt19937_64& rng, long bound = 9, long den = 6) {
  return {random_rational(rng, bound, den), random_rational(rng, bound, den)};
}

inline GaussianRational random_nonzero(std::mt19937_64& rng) {
  for (;;) {
    GaussianRational z = random_gr(rng);
    if (!z.is_zero()) return z;
  }
}

struct GoldenLine {
  std::string lhs;  // "{F1,K21}" or "F4" / "Kt52"
  PolyExpr rhs;
};

inline std::vector<GoldenLine> load_golden(const std::string& file) {
  std::ifstream in(std::string(CMSYM_GOLDEN_DIR) + "/" + file);
  if (!in) throw std::runtime_error("missing golden file " + file);
  std::vector<GoldenLine> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto eq = line.find('=');
    std::string lhs = line.substr(0, eq);
    while (!lhs.empty() && lhs.back() == ' ') lhs.pop_back();
    out.push_back({lhs, PolyExpr::parse(line.substr(eq + 1))});
  }
  return out;
}

/// "{A,B}" -> the pair of generator variables.
inline std::pair<Var, Var> bracket_pair(const std::string& lhs) {
  auto comma = lhs.find(',');
  Observable a = Observable::parse(lhs.substr(1, comma - 1));
  Observable b = Observable::parse(lhs.substr(comma + 1, lhs.size() - comma - 2));
  return {generator_var(a), generator_var(b)};
}

}  // namespace cmsym::testing
