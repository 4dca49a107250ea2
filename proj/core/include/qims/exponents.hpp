#pragma once

#include <vector>

#include "qims/parameters.hpp"

namespace qims {

/// Exponents of the one-copy weight
///   U(t) = prod_n t_n^{alpha_n/kappa} prod_i (1 - z_i t_{L-1})^{-beta_i/kappa}
///          prod_n (t_{n-1} - t_n)^{-gamma_n/kappa},  t_0 = 1.
/// Index n runs 1..L-1 (stored at n-1), i runs 1..N (stored at i-1).
template <Scalar S>
struct ExponentsM1 {
  std::vector<S> alpha;
  std::vector<S> beta;
  std::vector<S> gamma;
  S planck;
};

/// Exponents of the M-copy weight: per copy t^{alpha_n/kappa},
/// (1 - z_i t_{L-1})^{-beta_i/kappa}, (1 - t_1)^{-gamma/kappa}; between copies
/// (t_n^a - t_n^b)^{2/kappa} and (t_n^a - t_{n+1}^b)^{-1/kappa}.
template <Scalar S>
struct ExponentsM {
  std::vector<S> alpha;
  std::vector<S> beta;
  S gamma;
  S planck;
  int M = 1;
};

/// alpha_n = e_{n+1} - e_n + kappa_{n+1} (e_L = e_0, kappa_L = 1), beta_i = -theta_i,
/// gamma_n = kappa_n. Requires kappa_0 - sum theta_i = 1.
template <Scalar S>
ExponentsM1<S> dictionary_m1(const Parameters<S>& params);

/// alpha_n = e_{n+1} - e_n + 1, beta_i = -theta_i, gamma = kappa_1 + M - 1.
/// Requires kappa_0 - sum theta_i = M and kappa_n = 1 for 2 <= n <= L-1.
template <Scalar S>
ExponentsM<S> dictionary_m(const Parameters<S>& params, int M);

/// Inverse of dictionary_m1: the unique exact parameters with the given
/// exponents (hbar = 1).
Parameters<Rational> parameters_for_m1(int L, int N, const std::vector<Rational>& alpha,
                                       const std::vector<Rational>& beta, const std::vector<Rational>& gamma,
                                       const Rational& planck);

/// Inverse of dictionary_m for a given copy count M (kappa_n = 1 for n >= 2).
Parameters<Rational> parameters_for_m(int L, int N, int M, const std::vector<Rational>& alpha,
                                      const std::vector<Rational>& beta, const Rational& gamma,
                                      const Rational& planck);

}  // namespace qims
