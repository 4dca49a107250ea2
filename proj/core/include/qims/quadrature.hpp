#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace qims {

/// One-dimensional rule on (0, 1) for integrals of u^a (1-u)^b g(u): nodes are
/// stored as log u and log(1-u) so that both endpoints stay resolved, and
/// sum_k weight[k] g(u_k) approximates the integral.
struct AxisRule {
  double a = 0.0;
  double b = 0.0;
  std::vector<double> log_u;
  std::vector<double> log_1mu;
  std::vector<double> weight;
  std::size_t size() const { return weight.size(); }
};

/// log B(x, y).
double log_beta(double x, double y);

/// Gauss-Jacobi rule with n nodes for the weight u^a (1-u)^b, a, b > -1,
/// from the Golub-Welsch eigenproblem of the Jacobi matrix.
AxisRule gauss_jacobi_rule(int n, double a, double b);

/// Double-exponential (tanh-sinh) rule with n nodes; the weight u^a (1-u)^b is
/// folded into the weights, evaluated in the log domain. The truncation
/// window is widened for exponents close to -1.
AxisRule tanh_sinh_rule(int n, double a, double b);

/// Draws log u and log(1-u) for u ~ Beta(a+1, b+1). Small shape parameters are
/// handled in the log domain so no draw collapses onto an endpoint.
class BetaSampler {
 public:
  BetaSampler(double a, double b);
  template <class Rng>
  void draw(Rng& rng, double& log_u, double& log_1mu) const {
    const double lx = log_gamma_variate(rng, shape_u_);
    const double ly = log_gamma_variate(rng, shape_v_);
    const double m = std::max(lx, ly);
    const double lse = m + std::log(std::exp(lx - m) + std::exp(ly - m));
    log_u = lx - lse;
    log_1mu = ly - lse;
  }
  /// log of the normalisation B(a+1, b+1).
  double log_norm() const { return log_norm_; }

 private:
  template <class Rng>
  static double log_gamma_variate(Rng& rng, double shape) {
    if (shape >= 1.0) {
      std::gamma_distribution<double> g(shape, 1.0);
      return std::log(g(rng));
    }
    // Gamma(s) = Gamma(s + 1) * U^{1/s}.
    std::gamma_distribution<double> g(shape + 1.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    double u = unif(rng);
    while (u <= 0.0) u = unif(rng);
    return std::log(g(rng)) + std::log(u) / shape;
  }

  double shape_u_;
  double shape_v_;
  double log_norm_;
};

}  // namespace qims
