#include "qims/series.hpp"

#include <cmath>
#include <string>

#include "qims/errors.hpp"
#include "qims/exponents.hpp"
#include "qims/integrals.hpp"

namespace qims {

namespace {

double beta_fn(double x, double y) {
  const double s = x + y;
  if ((x <= 0 && x == std::floor(x)) || (y <= 0 && y == std::floor(y))) {
    throw DomainError("Beta function pole at (" + std::to_string(x) + ", " + std::to_string(y) + ")");
  }
  if (s <= 0 && s == std::floor(s)) return 0.0;
  return std::tgamma(x) * std::tgamma(y) / std::tgamma(s);
}

struct TermShape {
  double coeff = 1.0;
  double lambda = 0.0;
  std::vector<double> a, b;
};

TermShape shape_of(const ChainIntegrand& f) {
  const ChainTerm& t = f.terms.front();
  TermShape s;
  s.coeff = t.coeff;
  for (const auto& fac : t.factors) {
    if (fac.kind == ChainFactor::Kind::Linear) s.lambda -= fac.e;
  }
  for (int k = 1; k <= f.K; ++k) {
    const auto [a, b] = ChainIntegrand::axis_exponents(t, f.K, k);
    s.a.push_back(a);
    s.b.push_back(b);
  }
  return s;
}

/// Ratio of term k+1 to term k.
double ratio(const TermShape& s, int k, double z) {
  double r = (s.lambda + k) / (k + 1.0) * z;
  for (std::size_t n = 0; n < s.a.size(); ++n) r *= (s.a[n] + k + 1.0) / (s.a[n] + s.b[n] + k + 2.0);
  return r;
}

}  // namespace

SeriesResult series_psi1(const Parameters<Rational>& params, double z, int order) {
  if (order < 0) throw ParameterError("series order must be non-negative");
  if (params.N != 1) throw ParameterError("the series expansion is implemented for N = 1 only");
  if (!(std::abs(z) < 1.0)) throw DomainError("series needs |z| < 1, got z = " + std::to_string(z));
  const auto integrands = psi1_integrands(dictionary_m1(params));
  SeriesResult out;
  out.basis = enumerate_basis(params.L, 1, 1);
  out.order = order;
  for (const auto& f : integrands) {
    f.worst_exponents();  // integrability (possibly after finite-part regularisation)
    const TermShape s = shape_of(f);
    double term = s.coeff;
    for (std::size_t n = 0; n < s.a.size(); ++n) term *= beta_fn(s.a[n] + 1.0, s.b[n] + 1.0);
    double sum = term;
    for (int k = 0; k < order; ++k) {
      term *= ratio(s, k, z);
      sum += term;
    }
    // Tail: |next term| / (1 - rho) with rho bounding the ratios beyond the cut.
    double next = term * ratio(s, order, z);
    double rho = std::abs(z);
    for (int k = order + 1; k <= order + 64; ++k) rho = std::max(rho, std::abs(ratio(s, k, z)));
    out.tail_bound += rho < 1.0 ? std::abs(next) / (1.0 - rho) : INFINITY;
    out.c.push_back(sum);
  }
  return out;
}

}  // namespace qims
