#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qims/errors.hpp"
#include "qims/exponents.hpp"
#include "qims/multi_index.hpp"

namespace qims {

// Rational parts of the twisted forms. A point t of one copy is passed as
// t_1..t_{L-1} (index n-1), with t_0 = 1 implicit. These templates work for
// double and for exact rationals.

/// f_0(t) = prod_{n=1}^{L-1} 1/(t_{n-1} - t_n).
template <class T>
T form_f0(std::span<const T> t) {
  T prev = T(1);
  T out = T(1);
  for (const auto& x : t) {
    out /= (prev - x);
    prev = x;
  }
  return out;
}

/// f_n^{(i)}(t) = 1/(1 - z_i t_{L-1}) prod_{m != n} 1/(t_{m-1} - t_m).
template <class T>
T form_fn(std::span<const T> t, int n, const T& zi) {
  T prev = T(1);
  T out = T(1) / (T(1) - zi * t.back());
  for (std::size_t m = 1; m <= t.size(); ++m) {
    if (static_cast<int>(m) != n) out /= (prev - t[m - 1]);
    prev = t[m - 1];
  }
  return out;
}

/// phi_0 = f_0 / t_{L-1}.
template <class T>
T form_phi0(std::span<const T> t) {
  return form_f0(t) / t.back();
}

/// phi_n^{(i)} = f_n^{(i)} / t_{L-1}.
template <class T>
T form_phin(std::span<const T> t, int n, const T& zi) {
  return form_fn(t, n, zi) / t.back();
}

/// Throws DomainError unless 1 > t_1 > ... > t_{L-1} > 0.
void check_m1_chamber(std::span<const double> t);

/// U(t) of the one-copy weight for real z with z_i t_{L-1} < 1.
double weight_m1(std::span<const double> t, std::span<const double> z, const ExponentsM1<Rational>& exps);

struct FormsM1 {
  double phi0 = 0.0;
  std::vector<std::vector<double>> phi;  // phi[n-1][i-1] = phi_n^{(i)}
};

FormsM1 forms_m1(std::span<const double> t, std::span<const double> z);

/// Bookkeeping of phi_A for A in A_M: the copies 1..M are cut into consecutive
/// blocks, one per (n, i) in the sweep i = 1..N (outer), n = 1..L-1 (inner),
/// block (n, i) having A_{n,i} copies; the last A_0 copies carry f_0.
struct PhiIndexData {
  int M = 0;
  int A0 = 0;
  std::uint64_t multinomial = 1;  // M! / (A_0! prod A_{n,i}!)
  int sign = 1;                   // (-1)^{M - A_0}
  struct Block {
    int n;
    int i;
    int begin;  // first copy (1-based)
    int end;    // last copy, = S_n^{(i)}
  };
  std::vector<Block> blocks;  // nonempty blocks only
  /// (n, i) of the form f_n^{(i)} carried by copy c, or (0, 0) for f_0.
  std::pair<int, int> form_of_copy(int c) const;
};

PhiIndexData phi_index_data(const MultiIndex& a, int M);

}  // namespace qims
