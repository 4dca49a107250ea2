#include "qims/parameters.hpp"

#include <cmath>
#include <string>

#include "qims/errors.hpp"

namespace qims {
namespace {

bool near_equal(const Complex& a, const Complex& b) {
  const double scale = std::max({1.0, std::abs(a), std::abs(b)});
  return std::abs(a - b) <= 1e-12 * scale;
}

bool equal(const Rational& a, const Rational& b) { return a == b; }
bool equal(const Complex& a, const Complex& b) { return near_equal(a, b); }

}  // namespace

template <Scalar S>
void Parameters<S>::validate() const {
  shape().validate();
  if (static_cast<int>(e.size()) != L) throw ParameterError("expected L values e_0..e_{L-1}");
  if (static_cast<int>(kappa.size()) != L) throw ParameterError("expected L values kappa_0..kappa_{L-1}");
  if (static_cast<int>(theta.size()) != N + 1) throw ParameterError("expected N+1 values theta_0..theta_N");
  S sum_e = from_int<S>(0);
  for (const auto& x : e) sum_e += x;
  S target = from_int<S>(L - 1);
  target /= from_int<S>(2);
  if (!equal(sum_e, target)) {
    throw ParameterError("relation sum e_m = (L-1)/2 violated (sum e = " + to_string(sum_e) + ")");
  }
  S sum_kappa = from_int<S>(0);
  for (const auto& x : kappa) sum_kappa += x;
  S sum_theta = from_int<S>(0);
  for (const auto& x : theta) sum_theta += x;
  if (!equal(sum_kappa, sum_theta)) {
    throw ParameterError("relation sum kappa_m = sum theta_i violated (" + to_string(sum_kappa) +
                         " != " + to_string(sum_theta) + ")");
  }
  if (is_zero(planck)) throw ParameterError("planck constant must be nonzero");
}

template struct Parameters<Rational>;
template struct Parameters<Complex>;

Parameters<Rational> make_parameters(int L, int N, std::vector<Rational> e, std::vector<Rational> kappa,
                                     std::vector<Rational> theta_1_to_N, Rational hbar, Rational planck,
                                     std::optional<Rational> theta0) {
  Parameters<Rational> p;
  p.L = L;
  p.N = N;
  p.e = std::move(e);
  p.kappa = std::move(kappa);
  p.hbar = std::move(hbar);
  p.planck = std::move(planck);
  if (static_cast<int>(theta_1_to_N.size()) != N) throw ParameterError("expected N values theta_1..theta_N");
  Rational derived = 0;
  for (const auto& k : p.kappa) derived += k;
  for (const auto& t : theta_1_to_N) derived -= t;
  if (theta0 && *theta0 != derived) {
    throw ParameterError("relation sum kappa_m = sum theta_i violated: theta_0 = " + to_string(*theta0) +
                         " but the relation requires " + to_string(derived));
  }
  p.theta.reserve(N + 1);
  p.theta.push_back(derived);
  for (auto& t : theta_1_to_N) p.theta.push_back(std::move(t));
  p.validate();
  return p;
}

}  // namespace qims
