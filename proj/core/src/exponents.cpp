#include "qims/exponents.hpp"

#include <string>

#include "qims/errors.hpp"

namespace qims {

namespace {

template <Scalar S>
bool same(const S& a, const S& b) {
  if constexpr (is_exact_v<S>) {
    return a == b;
  } else {
    return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b));
  }
}

template <Scalar S>
void require_resonance(const Parameters<S>& p, int M) {
  if (!same(p.resonance(), from_int<S>(M))) {
    throw ParameterError("integral formula needs kappa_0 - sum theta_i = " + std::to_string(M) + " (got " +
                         to_string(p.resonance()) + ")");
  }
}

}  // namespace

template <Scalar S>
ExponentsM1<S> dictionary_m1(const Parameters<S>& params) {
  params.validate();
  require_resonance(params, 1);
  const int L = params.L;
  ExponentsM1<S> out;
  out.planck = params.planck;
  for (int n = 1; n < L; ++n) {
    const S& e_next = n + 1 == L ? params.e[0] : params.e[n + 1];
    const S kappa_next = n + 1 == L ? from_int<S>(1) : params.kappa[n + 1];
    out.alpha.push_back(e_next - params.e[n] + kappa_next);
    out.gamma.push_back(params.kappa[n]);
  }
  for (int i = 1; i <= params.N; ++i) out.beta.push_back(-params.theta[i]);
  return out;
}

template <Scalar S>
ExponentsM<S> dictionary_m(const Parameters<S>& params, int M) {
  if (M < 1) throw ParameterError("copy count M must be >= 1");
  params.validate();
  require_resonance(params, M);
  const int L = params.L;
  for (int n = 2; n < L; ++n) {
    if (!same(params.kappa[n], from_int<S>(1))) {
      throw ParameterError("integral formula needs kappa_" + std::to_string(n) + " = 1 (got " +
                           to_string(params.kappa[n]) + ")");
    }
  }
  ExponentsM<S> out;
  out.planck = params.planck;
  out.M = M;
  for (int n = 1; n < L; ++n) {
    const S& e_next = n + 1 == L ? params.e[0] : params.e[n + 1];
    out.alpha.push_back(e_next - params.e[n] + from_int<S>(1));
  }
  for (int i = 1; i <= params.N; ++i) out.beta.push_back(-params.theta[i]);
  out.gamma = params.kappa[1] + from_int<S>(M - 1);
  return out;
}

namespace {

/// e from the differences d_n = e_{n+1} - e_n (n = 1..L-1, e_L = e_0) and sum e = (L-1)/2.
std::vector<Rational> solve_e(int L, const std::vector<Rational>& diff) {
  // e_n = e_1 + sum_{m<n} d_m for n = 1..L-1, e_0 = e_{L-1} + d_{L-1}.
  std::vector<Rational> offset(L);
  offset[1] = 0;
  for (int n = 2; n < L; ++n) offset[n] = offset[n - 1] + diff[n - 2];
  offset[0] = offset[L - 1] + diff[L - 2];
  Rational total = 0;
  for (const auto& o : offset) total += o;
  const Rational e1 = (Rational(L - 1) / 2 - total) / L;
  std::vector<Rational> e(L);
  for (int n = 0; n < L; ++n) e[n] = e1 + offset[n];
  return e;
}

void check_sizes(int L, int N, std::size_t alpha, std::size_t beta) {
  if (L < 2 || N < 1) throw ParameterError("need L >= 2 and N >= 1");
  if (static_cast<int>(alpha) != L - 1) throw ParameterError("alpha needs L-1 entries");
  if (static_cast<int>(beta) != N) throw ParameterError("beta needs N entries");
}

}  // namespace

Parameters<Rational> parameters_for_m1(int L, int N, const std::vector<Rational>& alpha,
                                       const std::vector<Rational>& beta, const std::vector<Rational>& gamma,
                                       const Rational& planck) {
  check_sizes(L, N, alpha.size(), beta.size());
  if (static_cast<int>(gamma.size()) != L - 1) throw ParameterError("gamma needs L-1 entries");
  std::vector<Rational> kappa(L);
  for (int n = 1; n < L; ++n) kappa[n] = gamma[n - 1];
  std::vector<Rational> diff;
  for (int n = 1; n < L; ++n) diff.push_back(alpha[n - 1] - (n + 1 == L ? Rational(1) : kappa[n + 1]));
  std::vector<Rational> theta;
  Rational sum_theta = 0;
  for (const auto& b : beta) {
    theta.push_back(-b);
    sum_theta -= b;
  }
  kappa[0] = 1 + sum_theta;
  return make_parameters(L, N, solve_e(L, diff), kappa, theta, 1, planck);
}

Parameters<Rational> parameters_for_m(int L, int N, int M, const std::vector<Rational>& alpha,
                                      const std::vector<Rational>& beta, const Rational& gamma,
                                      const Rational& planck) {
  check_sizes(L, N, alpha.size(), beta.size());
  if (M < 1) throw ParameterError("copy count M must be >= 1");
  std::vector<Rational> kappa(L, Rational(1));
  kappa[1] = gamma - (M - 1);
  std::vector<Rational> diff;
  for (int n = 1; n < L; ++n) diff.push_back(alpha[n - 1] - 1);
  std::vector<Rational> theta;
  Rational sum_theta = 0;
  for (const auto& b : beta) {
    theta.push_back(-b);
    sum_theta -= b;
  }
  kappa[0] = M + sum_theta;
  return make_parameters(L, N, solve_e(L, diff), kappa, theta, 1, planck);
}

template ExponentsM1<Rational> dictionary_m1<Rational>(const Parameters<Rational>&);
template ExponentsM1<Complex> dictionary_m1<Complex>(const Parameters<Complex>&);
template ExponentsM<Rational> dictionary_m<Rational>(const Parameters<Rational>&, int);
template ExponentsM<Complex> dictionary_m<Complex>(const Parameters<Complex>&, int);

}  // namespace qims
