#pragma once

#include <vector>

#include "qims/multi_index.hpp"
#include "qims/parameters.hpp"

namespace qims {

struct SeriesResult {
  std::vector<MultiIndex> basis;  // enumerate_basis(L, 1, 1)
  std::vector<double> c;
  /// Geometric bound on the omitted terms k > order, summed over coefficients.
  double tail_bound = 0.0;
  int order = 0;
};

/// Coefficients of Psi_1 for N = 1 as power series in z, integrated term by
/// term on the unit cube: each coefficient is
///   coeff * sum_k (lambda)_k / k! z^k prod_n B(a_n + k + 1, b_n + 1)
/// with (a_n, b_n) the per-axis exponents and lambda the exponent of
/// (1 - z t_{L-1})^{-lambda}. Axes with b_n in (-2, -1) take the analytically
/// continued Beta value, matching the finite-part quadrature.
SeriesResult series_psi1(const Parameters<Rational>& params, double z, int order);

}  // namespace qims
