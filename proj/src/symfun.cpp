#include "cmsym/symfun.hpp"

#include <map>
#include <mutex>

namespace cmsym::symfun {

mpz_class factorial(int k) {
  mpz_class r;
  mpz_fac_ui(r.get_mpz_t(), static_cast<unsigned long>(k));
  return r;
}

namespace {

void enumerate(int k, int part, int remaining, std::vector<int>& mult, std::vector<Partition>& out) {
  if (remaining == 0) {
    mpz_class denom = 1;
    for (int i = 1; i <= k; ++i) {
      mpz_class fi = factorial(i);
      for (int j = 0; j < mult[i - 1]; ++j) denom *= fi;
      denom *= factorial(mult[i - 1]);
    }
    out.push_back({mult, factorial(k) / denom});
    return;
  }
  if (part == 0) return;
  for (int j = remaining / part; j >= 0; --j) {
    mult[part - 1] = j;
    enumerate(k, part - 1, remaining - j * part, mult, out);
  }
  mult[part - 1] = 0;
}

}  // namespace

const std::vector<Partition>& partitions(int k) {
  static std::mutex mu;
  static std::map<int, std::vector<Partition>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(k);
  if (it != cache.end()) return it->second;
  std::vector<Partition> out;
  std::vector<int> mult(k, 0);
  if (k == 0) {
    out.push_back({{}, 1});
  } else {
    enumerate(k, k, k, mult, out);
  }
  return cache.emplace(k, std::move(out)).first->second;
}

}  // namespace cmsym::symfun
