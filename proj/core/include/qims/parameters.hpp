#pragma once

#include <optional>
#include <vector>

#include "qims/multi_index.hpp"
#include "qims/scalar.hpp"

namespace qims {

/// Scalar constants of the model. Index conventions follow the algebra:
/// e[n] = e_n and kappa[n] = kappa_n for 0 <= n <= L-1, theta[i] = theta_i for
/// 0 <= i <= N. `planck` is the constant multiplying d/dz_i in the
/// Schroedinger system; `hbar` is the commutator scale [p, q] = hbar.
template <Scalar S>
struct Parameters {
  int L = 2;
  int N = 1;
  std::vector<S> e;
  std::vector<S> kappa;
  std::vector<S> theta;
  S hbar = from_int<S>(1);
  S planck = from_int<S>(1);

  Shape shape() const { return {L, N}; }

  /// kappa_0 - sum_{i>=1} theta_i, the quantity fixed by the resonance conditions.
  S resonance() const {
    S r = kappa[0];
    for (int i = 1; i <= N; ++i) r -= theta[i];
    return r;
  }

  /// Checks sizes, sum e = (L-1)/2, sum kappa = sum theta, planck != 0.
  /// Exact for rationals; relative tolerance 1e-12 for complex values.
  /// Throws ParameterError naming the violated relation.
  void validate() const;
};

/// Builds exact parameters from e_0..e_{L-1}, kappa_0..kappa_{L-1} and
/// theta_1..theta_N. theta_0 is derived from sum kappa = sum theta unless given,
/// in which case it is checked.
Parameters<Rational> make_parameters(int L, int N, std::vector<Rational> e, std::vector<Rational> kappa,
                                     std::vector<Rational> theta_1_to_N, Rational hbar = 1, Rational planck = 1,
                                     std::optional<Rational> theta0 = std::nullopt);

template <Scalar To>
Parameters<To> convert_parameters(const Parameters<Rational>& p) {
  if constexpr (is_exact_v<To>) {
    return p;
  } else {
    Parameters<Complex> out;
    out.L = p.L;
    out.N = p.N;
    for (const auto& x : p.e) out.e.push_back(from_rational<Complex>(x));
    for (const auto& x : p.kappa) out.kappa.push_back(from_rational<Complex>(x));
    for (const auto& x : p.theta) out.theta.push_back(from_rational<Complex>(x));
    out.hbar = from_rational<Complex>(p.hbar);
    out.planck = from_rational<Complex>(p.planck);
    return out;
  }
}

template <Scalar To>
std::vector<To> convert_points(const std::vector<Rational>& z) {
  std::vector<To> out;
  out.reserve(z.size());
  for (const auto& x : z) out.push_back(from_rational<To>(x));
  return out;
}

}  // namespace qims
