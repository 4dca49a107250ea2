#include "qims/ode.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qims/errors.hpp"

namespace qims {

namespace {

// Dormand-Prince coefficients.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

double error_norm(const CVector& err, const CVector& y, const CVector& ynew, const OdeOptions& o) {
  if (err.empty()) return 0.0;
  double acc = 0.0;
  for (std::size_t k = 0; k < err.size(); ++k) {
    const double sc = o.atol + o.rtol * std::max(std::abs(y[k]), std::abs(ynew[k]));
    const double r = std::abs(err[k]) / sc;
    acc += r * r;
  }
  return std::sqrt(acc / static_cast<double>(err.size()));
}

double rms(const CVector& v, const CVector& y, const OdeOptions& o) {
  if (v.empty()) return 0.0;
  double acc = 0.0;
  for (std::size_t k = 0; k < v.size(); ++k) {
    const double r = std::abs(v[k]) / (o.atol + o.rtol * std::abs(y[k]));
    acc += r * r;
  }
  return std::sqrt(acc / static_cast<double>(v.size()));
}

}  // namespace

CVector integrate_dopri5(const OdeRhs& f, double s0, double s1, CVector y, const OdeOptions& opts,
                         OdeStats& stats) {
  if (!(opts.rtol > 0) || !(opts.atol > 0)) throw ParameterError("ODE tolerances must be positive");
  const double span = s1 - s0;
  if (span == 0.0 || y.empty()) return y;
  const double dir = span > 0 ? 1.0 : -1.0;
  const std::size_t n = y.size();
  CVector k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), tmp(n), ynew(n), err(n);

  auto combo = [&](const CVector& base, double h, std::initializer_list<std::pair<double, const CVector*>> parts) {
    for (std::size_t k = 0; k < n; ++k) {
      Complex acc = 0.0;
      for (const auto& [w, v] : parts) acc += w * (*v)[k];
      tmp[k] = base[k] + h * acc;
    }
  };

  double s = s0;
  f(s, y, k1);
  ++stats.evaluations;

  // Initial step from the Hairer-Norsett-Wanner heuristic.
  double h;
  {
    const double d0 = rms(y, y, opts);
    const double d1 = rms(k1, y, opts);
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h0 = std::min(h0, std::abs(span));
    combo(y, dir * h0, {{1.0, &k1}});
    f(s + dir * h0, tmp, k2);
    ++stats.evaluations;
    CVector diff(n);
    for (std::size_t k = 0; k < n; ++k) diff[k] = k2[k] - k1[k];
    const double d2 = rms(diff, y, opts) / h0;
    const double h1 = std::max(d1, d2) <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / std::max(d1, d2), 0.2);
    h = std::min({100 * h0, h1, std::abs(span)});
  }

  std::size_t steps = 0;
  bool last_rejected = false;
  while (dir * (s1 - s) > 0) {
    if (++steps > opts.max_steps) {
      std::ostringstream msg;
      msg << "step budget exhausted at s = " << s;
      throw PropagationError(msg.str());
    }
    if (h < 1e-14 * std::max(1.0, std::abs(s)) * 16) {
      std::ostringstream msg;
      msg << "step size underflow at s = " << s;
      throw PropagationError(msg.str());
    }
    bool final_step = false;
    if (h >= dir * (s1 - s)) {
      h = dir * (s1 - s);
      final_step = true;
    }
    const double hs = dir * h;
    combo(y, hs, {{a21, &k1}});
    f(s + c2 * hs, tmp, k2);
    combo(y, hs, {{a31, &k1}, {a32, &k2}});
    f(s + c3 * hs, tmp, k3);
    combo(y, hs, {{a41, &k1}, {a42, &k2}, {a43, &k3}});
    f(s + c4 * hs, tmp, k4);
    combo(y, hs, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}});
    f(s + c5 * hs, tmp, k5);
    combo(y, hs, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}});
    f(s + hs, tmp, k6);
    combo(y, hs, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
    ynew = tmp;
    f(s + hs, ynew, k7);
    stats.evaluations += 6;
    for (std::size_t k = 0; k < n; ++k) {
      err[k] = hs * (e1 * k1[k] + e3 * k3[k] + e4 * k4[k] + e5 * k5[k] + e6 * k6[k] + e7 * k7[k]);
    }
    const double en = error_norm(err, y, ynew, opts);
    if (!std::isfinite(en)) {
      std::ostringstream msg;
      msg << "non-finite solution near s = " << s;
      throw PropagationError(msg.str());
    }
    if (en <= 1.0) {
      s = final_step ? s1 : s + hs;
      y.swap(ynew);
      k1.swap(k7);
      ++stats.accepted;
      stats.min_step = stats.accepted == 1 ? h : std::min(stats.min_step, h);
      stats.max_step = std::max(stats.max_step, h);
      double fac = en == 0.0 ? 5.0 : 0.9 * std::pow(en, -0.2);
      fac = std::clamp(fac, 0.2, 5.0);
      if (last_rejected) fac = std::min(fac, 1.0);
      h *= fac;
      last_rejected = false;
    } else {
      ++stats.rejected;
      h *= std::max(0.2, 0.9 * std::pow(en, -0.2));
      last_rejected = true;
    }
  }
  return y;
}

}  // namespace qims
