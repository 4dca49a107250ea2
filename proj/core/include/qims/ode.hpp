#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "qims/scalar.hpp"

namespace qims {

using CVector = std::vector<Complex>;

struct OdeOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  std::size_t max_steps = 2'000'000;
};

struct OdeStats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t evaluations = 0;
  double min_step = 0.0;
  double max_step = 0.0;
};

/// dy/ds = f(s, y); f writes into its third argument.
using OdeRhs = std::function<void(double, const CVector&, CVector&)>;

/// Dormand-Prince 5(4) with the usual mixed error norm
/// sqrt(mean((err_k / (atol + rtol max(|y_k|, |y_new_k|)))^2)) <= 1.
/// Throws PropagationError when the step shrinks below the resolution of s
/// or the step budget is exhausted.
CVector integrate_dopri5(const OdeRhs& f, double s0, double s1, CVector y0, const OdeOptions& opts,
                         OdeStats& stats);

}  // namespace qims
