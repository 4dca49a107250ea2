#pragma once

#include <algorithm>
#include <optional>
#include <random>
#include <set>
#include <vector>

#include "qims/parameters.hpp"

namespace qims::testing {

/// k / den with k uniform in [lo * den, hi * den].
inline Rational random_rational(std::mt19937_64& rng, long lo, long hi, long den = 7) {
  std::uniform_int_distribution<long> d(lo * den, hi * den);
  return make_rational(d(rng), den);
}

/// Random exact parameters with sum e = (L-1)/2 and theta_0 derived. With a
/// level, kappa_0 is set so that kappa_0 - sum theta_i equals it.
inline Parameters<Rational> random_parameters(int L, int N, std::mt19937_64& rng,
                                              std::optional<int> level = std::nullopt,
                                              Rational hbar = 1) {
  std::vector<Rational> e, kappa, theta;
  Rational sum_e = 0;
  for (int m = 0; m + 1 < L; ++m) {
    e.push_back(random_rational(rng, -2, 2));
    sum_e += e.back();
  }
  e.push_back(make_rational(L - 1, 2) - sum_e);
  for (int m = 0; m < L; ++m) kappa.push_back(random_rational(rng, -3, 3, 5));
  Rational sum_theta = 0;
  for (int i = 1; i <= N; ++i) {
    theta.push_back(random_rational(rng, -2, 2, 3));
    sum_theta += theta.back();
  }
  if (level) kappa[0] = Rational(*level) + sum_theta;
  return make_parameters(L, N, e, kappa, theta, hbar, random_rational(rng, 1, 3, 2));
}

/// N distinct exact points in (0, 1), decreasing.
inline std::vector<Rational> random_z(int N, std::mt19937_64& rng) {
  std::uniform_int_distribution<long> d(1, 96);
  std::set<long> picked;
  while (static_cast<int>(picked.size()) < N) picked.insert(d(rng));
  std::vector<Rational> z;
  for (long k : picked) z.push_back(make_rational(k, 97));
  std::reverse(z.begin(), z.end());
  return z;
}

inline std::vector<double> to_doubles(const std::vector<Rational>& v) {
  std::vector<double> out;
  for (const auto& x : v) out.push_back(x.get_d());
  return out;
}

}  // namespace qims::testing
