#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace qims {

/// Model dimensions: L >= 2 q-levels (rows 1..L-1 carry variables) and
/// N >= 1 times. Variables are q_m^{(i)} with 1 <= m <= L-1, 1 <= i <= N.
struct Shape {
  int L = 2;
  int N = 1;

  int rows() const { return L - 1; }
  int cols() const { return N; }
  int variables() const { return (L - 1) * N; }

  /// Throws ParameterError unless L >= 2, N >= 1 and the variable count fits
  /// in a MultiIndex.
  void validate() const;

  friend bool operator==(const Shape&, const Shape&) = default;
};

/// Exponent matrix A of a monomial q^A: entry A_{m,i} for 1 <= m <= L-1,
/// 1 <= i <= N, stored row-major.
class MultiIndex {
 public:
  static constexpr int kMaxEntries = 24;

  MultiIndex() = default;
  explicit MultiIndex(Shape shape);
  MultiIndex(Shape shape, std::span<const int> row_major);

  Shape shape() const { return {L_, N_}; }

  int operator()(int m, int i) const { return entries_[flat(m, i)]; }
  void set(int m, int i, int value);
  /// Adds delta to A_{m,i}; returns false (leaving *this unchanged) when the
  /// entry would become negative.
  bool shift(int m, int i, int delta);

  int entry(int k) const { return entries_[k]; }
  int size() const { return (L_ - 1) * N_; }

  /// d(A), the total degree.
  int degree() const;
  /// d_m(A) = sum_i A_{m,i}.
  int level_degree(int m) const;
  /// S_n^{(i)} = sum_{j<i} sum_m A_{m,j} + sum_{m<=n} A_{m,i}; S_0^{(i)} is
  /// the end of the previous column.
  int segment_end(int n, int i) const;

  /// "m1i1:e,m1i2:e,..." over every entry, row-major.
  std::string to_string() const;

  friend bool operator==(const MultiIndex& a, const MultiIndex& b) {
    return a.L_ == b.L_ && a.N_ == b.N_ && a.entries_ == b.entries_;
  }

 private:
  int flat(int m, int i) const { return (m - 1) * N_ + (i - 1); }

  std::uint8_t L_ = 2;
  std::uint8_t N_ = 1;
  std::array<std::uint8_t, kMaxEntries> entries_{};
};

/// Graded lexicographic order: total degree first, then row-major entries.
struct GradedLexLess {
  bool operator()(const MultiIndex& a, const MultiIndex& b) const;
};

/// Exact binomial coefficient; throws ParameterError on overflow.
std::uint64_t binomial(int n, int k);

/// All A with d(A) <= M, graded-lex ordered. Length binomial(M + (L-1)N, (L-1)N).
std::vector<MultiIndex> enumerate_basis(int L, int N, int M);

/// All A with d_m(A) <= T_m for every level m, graded-lex ordered.
/// Length prod_m binomial(T_m + N, N).
std::vector<MultiIndex> enumerate_basis_ft(int L, int N, std::span<const int> T);

}  // namespace qims
