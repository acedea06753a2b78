#include "cmsym/poisson.hpp"

#include <random>

namespace cmsym {

std::string to_string(VerdictKind v) {
  switch (v) {
    case VerdictKind::holds:
      return "holds";
    case VerdictKind::refuted:
      return "refuted";
    case VerdictKind::error:
      return "error";
  }
  return "error";
}

PhasePoint<GaussianRational> sample_point(int N, const ModelParams& params, const SamplerConfig& cfg,
                                          std::uint64_t seed, std::uint64_t index, std::uint64_t attempt) {
  if (N < 1) throw ArityError("sample_point needs N >= 1");
  if (cfg.numerator_bound < 1 || cfg.denominator_max < 1) throw SamplerError("empty sampler bounds");
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                    static_cast<std::uint32_t>(attempt), static_cast<std::uint32_t>(N)};
  std::mt19937_64 rng(seq);
  std::uniform_int_distribution<long> num(-cfg.numerator_bound, cfg.numerator_bound);
  std::uniform_int_distribution<long> den(1, cfg.denominator_max);
  auto draw = [&] {
    Rational q(num(rng), den(rng));
    q.canonicalize();
    return GaussianRational(q);
  };

  // positions by rejection on the pairwise separation
  constexpr int kPositionTries = 1000;
  std::vector<GaussianRational> x;
  for (int tries = 0; static_cast<int>(x.size()) < N; ++tries) {
    if (tries > kPositionTries) throw SamplerError("could not place separated positions");
    GaussianRational c = draw();
    bool ok = true;
    for (const auto& y : x) {
      Rational d = c.re() - y.re();
      if (abs(d) < cfg.min_separation || sgn(d) == 0) ok = false;
    }
    if (ok) x.push_back(c);
  }
  std::vector<GaussianRational> p;
  for (int i = 0; i < N; ++i) p.push_back(draw());
  return PhasePoint<GaussianRational>(std::move(x), std::move(p), params);
}

}  // namespace cmsym
