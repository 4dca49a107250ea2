#pragma once

#include <gmpxx.h>

#include <complex>
#include <concepts>
#include <string>
#include <string_view>
#include <type_traits>

namespace qims {

using Rational = mpq_class;
using Complex = std::complex<double>;

/// The two scalar kinds the library computes with: exact rationals for
/// identity checks and complex doubles for quadrature and transport.
template <class S>
concept Scalar = std::same_as<S, Rational> || std::same_as<S, Complex>;

template <Scalar S>
inline constexpr bool is_exact_v = std::same_as<S, Rational>;

/// Residual magnitudes stay exact for rationals.
template <Scalar S>
using Magnitude = std::conditional_t<is_exact_v<S>, Rational, double>;

template <Scalar S>
constexpr const char* scalar_kind_name() {
  return is_exact_v<S> ? "exact" : "float";
}

/// p/q in canonical form (mpq_class(p, q) alone is not reduced).
inline Rational make_rational(long p, long q) {
  Rational r(p, q);
  r.canonicalize();
  return r;
}

inline bool is_zero(const Rational& x) { return sgn(x) == 0; }
inline bool is_zero(const Complex& x) { return x.real() == 0.0 && x.imag() == 0.0; }

inline Rational magnitude(const Rational& x) { return abs(x); }
inline double magnitude(const Complex& x) { return std::abs(x); }

inline double to_double(const Rational& x) { return x.get_d(); }
inline double to_double(double x) { return x; }

template <Scalar S>
S from_rational(const Rational& x) {
  if constexpr (is_exact_v<S>) {
    return x;
  } else {
    return Complex(x.get_d(), 0.0);
  }
}

template <Scalar S>
S from_int(long v) {
  if constexpr (is_exact_v<S>) {
    return Rational(v);
  } else {
    return Complex(static_cast<double>(v), 0.0);
  }
}

/// Parses "p/q", an integer, or a finite decimal ("0.125", "-1e-3") into an
/// exact rational. Throws ParameterError on malformed input or zero denominator.
Rational parse_rational(std::string_view text);

/// Always "p/q" (zero is "0/1").
std::string to_string(const Rational& x);
std::string to_string(const Complex& x);

}  // namespace qims
