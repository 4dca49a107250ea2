#include "qims/quadrature.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "qims/errors.hpp"

namespace qims {

double log_beta(double x, double y) { return std::lgamma(x) + std::lgamma(y) - std::lgamma(x + y); }

AxisRule gauss_jacobi_rule(int n, double a, double b) {
  if (n < 1) throw ParameterError("quadrature needs at least one node");
  if (!(a > -1.0) || !(b > -1.0)) throw DomainError("Jacobi weight exponents must exceed -1");
  // Jacobi polynomials on [-1, 1] with weight (1-x)^al (1+x)^be and u = (1+x)/2.
  const double al = b;
  const double be = a;
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    const double s = 2.0 * k + al + be;
    J(k, k) = k == 0 ? (be - al) / (al + be + 2.0) : (be * be - al * al) / (s * (s + 2.0));
    if (k + 1 < n) {
      const double m = k + 1.0;
      const double t = 2.0 * m + al + be;
      double off2;
      if (m == 1.0) {
        off2 = 4.0 * (1.0 + al) * (1.0 + be) / (t * t * (t + 1.0));
      } else {
        off2 = 4.0 * m * (m + al) * (m + be) * (m + al + be) / (t * t * (t + 1.0) * (t - 1.0));
      }
      J(k, k + 1) = J(k + 1, k) = std::sqrt(off2);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(J);
  if (eig.info() != Eigen::Success) throw ConvergenceError("Jacobi matrix eigensolver failed");
  const double log_mu0 = log_beta(a + 1.0, b + 1.0);
  AxisRule rule{a, b, {}, {}, {}};
  for (int k = 0; k < n; ++k) {
    const double x = std::clamp(eig.eigenvalues()(k), -1.0, 1.0);
    const double v0 = eig.eigenvectors()(0, k);
    rule.log_u.push_back(std::log((1.0 + x) / 2.0));
    rule.log_1mu.push_back(std::log((1.0 - x) / 2.0));
    rule.weight.push_back(std::exp(log_mu0) * v0 * v0);
  }
  return rule;
}

namespace {

// log(1 / (1 + exp(y))) without overflow.
double log_sigmoid_neg(double y) { return y > 0 ? -y - std::log1p(std::exp(-y)) : -std::log1p(std::exp(y)); }

}  // namespace

AxisRule tanh_sinh_rule(int n, double a, double b) {
  if (n < 2) throw ParameterError("tanh-sinh needs at least two nodes");
  if (!(a > -1.0) || !(b > -1.0)) throw DomainError("endpoint exponents must exceed -1");
  // Tail mass near u = 0 behaves like exp(-(a+1) pi sinh|t|); pick |t| <= T so
  // that it drops below 1e-18 at both ends.
  const double slow = std::min(a, b) + 1.0;
  const double T = std::asinh(42.0 / (std::numbers::pi * slow));
  const double h = 2.0 * T / (n - 1);
  AxisRule rule{a, b, {}, {}, {}};
  for (int k = 0; k < n; ++k) {
    const double t = -T + k * h;
    const double y = std::numbers::pi * std::sinh(t);
    // u = 1/(1 + exp(-y)), 1 - u = 1/(1 + exp(y)).
    const double lu = log_sigmoid_neg(-y);
    const double l1mu = log_sigmoid_neg(y);
    const double lw = std::log(h * std::numbers::pi * std::cosh(t)) + (a + 1.0) * lu + (b + 1.0) * l1mu;
    rule.log_u.push_back(lu);
    rule.log_1mu.push_back(l1mu);
    rule.weight.push_back(std::exp(lw));
  }
  return rule;
}

BetaSampler::BetaSampler(double a, double b) : shape_u_(a + 1.0), shape_v_(b + 1.0) {
  if (!(a > -1.0) || !(b > -1.0)) throw DomainError("Beta sampler exponents must exceed -1");
  log_norm_ = log_beta(shape_u_, shape_v_);
}

}  // namespace qims
