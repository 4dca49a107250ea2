#include "qims/forms.hpp"

#include <cmath>
#include <string>

namespace qims {

void check_m1_chamber(std::span<const double> t) {
  double prev = 1.0;
  for (std::size_t n = 0; n < t.size(); ++n) {
    if (!(t[n] < prev) || !(t[n] > 0.0)) {
      throw DomainError("point is outside the chamber 1 > t_1 > ... > t_{L-1} > 0 (coordinate " +
                        std::to_string(n + 1) + ")");
    }
    prev = t[n];
  }
}

double weight_m1(std::span<const double> t, std::span<const double> z, const ExponentsM1<Rational>& exps) {
  check_m1_chamber(t);
  if (t.size() != exps.alpha.size()) throw ParameterError("point has the wrong number of coordinates");
  if (z.size() != exps.beta.size()) throw ParameterError("expected one z value per time");
  const double kappa = exps.planck.get_d();
  double log_u = 0.0;
  double prev = 1.0;
  for (std::size_t n = 0; n < t.size(); ++n) {
    log_u += exps.alpha[n].get_d() / kappa * std::log(t[n]);
    log_u -= exps.gamma[n].get_d() / kappa * std::log(prev - t[n]);
    prev = t[n];
  }
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double base = 1.0 - z[i] * t.back();
    if (!(base > 0.0)) throw DomainError("1 - z_i t_{L-1} must stay positive on the chamber");
    log_u -= exps.beta[i].get_d() / kappa * std::log(base);
  }
  return std::exp(log_u);
}

FormsM1 forms_m1(std::span<const double> t, std::span<const double> z) {
  check_m1_chamber(t);
  FormsM1 out;
  out.phi0 = form_phi0(t);
  for (std::size_t n = 1; n <= t.size(); ++n) {
    std::vector<double> row;
    for (double zi : z) {
      if (!(1.0 - zi * t.back() > 0.0)) throw DomainError("1 - z_i t_{L-1} must stay positive on the chamber");
      row.push_back(form_phin(t, static_cast<int>(n), zi));
    }
    out.phi.push_back(std::move(row));
  }
  return out;
}

std::pair<int, int> PhiIndexData::form_of_copy(int c) const {
  for (const auto& b : blocks) {
    if (c >= b.begin && c <= b.end) return {b.n, b.i};
  }
  return {0, 0};
}

PhiIndexData phi_index_data(const MultiIndex& a, int M) {
  const int d = a.degree();
  if (d > M) throw ParameterError("multi-index degree exceeds M");
  PhiIndexData out;
  out.M = M;
  out.A0 = M - d;
  out.sign = (M - out.A0) % 2 == 0 ? 1 : -1;
  const Shape s = a.shape();
  // multinomial as a product of binomials
  std::uint64_t mult = 1;
  int used = 0;
  for (int i = 1; i <= s.N; ++i) {
    for (int n = 1; n <= s.rows(); ++n) {
      const int k = a(n, i);
      if (k == 0) continue;
      mult *= binomial(used + k, k);
      out.blocks.push_back({n, i, used + 1, used + k});
      used += k;
    }
  }
  mult *= binomial(M, out.A0);
  out.multinomial = mult;
  return out;
}

}  // namespace qims
