#include "qims/multi_index.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <limits>

#include "qims/errors.hpp"

namespace qims {

void Shape::validate() const {
  if (L < 2) throw ParameterError("L must be >= 2 (got " + std::to_string(L) + ")");
  if (N < 1) throw ParameterError("N must be >= 1 (got " + std::to_string(N) + ")");
  if (variables() > MultiIndex::kMaxEntries) {
    throw ParameterError("(L-1)*N = " + std::to_string(variables()) + " exceeds the supported " +
                         std::to_string(MultiIndex::kMaxEntries) + " variables");
  }
}

MultiIndex::MultiIndex(Shape shape) : L_(static_cast<std::uint8_t>(shape.L)), N_(static_cast<std::uint8_t>(shape.N)) {
  shape.validate();
}

MultiIndex::MultiIndex(Shape shape, std::span<const int> row_major) : MultiIndex(shape) {
  if (static_cast<int>(row_major.size()) != size()) {
    throw StructureError("multi-index needs " + std::to_string(size()) + " entries, got " +
                         std::to_string(row_major.size()));
  }
  for (int k = 0; k < size(); ++k) {
    if (row_major[k] < 0 || row_major[k] > 255) throw StructureError("multi-index entry out of range");
    entries_[k] = static_cast<std::uint8_t>(row_major[k]);
  }
}

void MultiIndex::set(int m, int i, int value) {
  if (m < 1 || m >= L_ || i < 1 || i > N_) throw StructureError("multi-index position out of range");
  if (value < 0 || value > 255) throw StructureError("multi-index entry out of range");
  entries_[flat(m, i)] = static_cast<std::uint8_t>(value);
}

bool MultiIndex::shift(int m, int i, int delta) {
  if (m < 1 || m >= L_ || i < 1 || i > N_) throw StructureError("multi-index position out of range");
  int v = entries_[flat(m, i)] + delta;
  if (v < 0) return false;
  if (v > 255) throw StructureError("multi-index entry overflow");
  entries_[flat(m, i)] = static_cast<std::uint8_t>(v);
  return true;
}

int MultiIndex::degree() const {
  int d = 0;
  for (int k = 0; k < size(); ++k) d += entries_[k];
  return d;
}

int MultiIndex::level_degree(int m) const {
  int d = 0;
  for (int i = 1; i <= N_; ++i) d += (*this)(m, i);
  return d;
}

int MultiIndex::segment_end(int n, int i) const {
  int s = 0;
  for (int j = 1; j < i; ++j) {
    for (int m = 1; m < L_; ++m) s += (*this)(m, j);
  }
  for (int m = 1; m <= n; ++m) s += (*this)(m, i);
  return s;
}

std::string MultiIndex::to_string() const {
  std::string out;
  for (int m = 1; m < L_; ++m) {
    for (int i = 1; i <= N_; ++i) {
      if (!out.empty()) out += ',';
      out += 'm' + std::to_string(m) + 'i' + std::to_string(i) + ':' + std::to_string((*this)(m, i));
    }
  }
  return out;
}

bool GradedLexLess::operator()(const MultiIndex& a, const MultiIndex& b) const {
  const int da = a.degree();
  const int db = b.degree();
  if (da != db) return da < db;
  const int n = std::min(a.size(), b.size());
  for (int k = 0; k < n; ++k) {
    if (a.entry(k) != b.entry(k)) return a.entry(k) < b.entry(k);
  }
  return a.size() < b.size();
}

std::uint64_t binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  if (!r.fits_ulong_p()) throw ParameterError("binomial overflow");
  return r.get_ui();
}

std::vector<MultiIndex> enumerate_basis(int L, int N, int M) {
  Shape shape{L, N};
  shape.validate();
  if (M < 0) throw ParameterError("M must be >= 0");
  if (M > 255) throw ParameterError("M too large");
  std::vector<MultiIndex> out;
  const int k = shape.variables();
  std::vector<int> digits(k, 0);
  auto rec = [&](auto&& self, int pos, int remaining) -> void {
    if (pos == k) {
      out.emplace_back(shape, digits);
      return;
    }
    for (int v = 0; v <= remaining; ++v) {
      digits[pos] = v;
      self(self, pos + 1, remaining - v);
    }
    digits[pos] = 0;
  };
  rec(rec, 0, M);
  std::sort(out.begin(), out.end(), GradedLexLess{});
  return out;
}

std::vector<MultiIndex> enumerate_basis_ft(int L, int N, std::span<const int> T) {
  Shape shape{L, N};
  shape.validate();
  if (static_cast<int>(T.size()) != L - 1) {
    throw ParameterError("T must have L-1 = " + std::to_string(L - 1) + " entries");
  }
  int cap = 0;
  for (int t : T) {
    if (t < 0) throw ParameterError("T_m must be >= 0");
    cap = std::max(cap, t);
  }
  if (cap > 255) throw ParameterError("T too large");
  std::vector<MultiIndex> out;
  const int k = shape.variables();
  std::vector<int> digits(k, 0);
  // Row m occupies slots (m-1)*N .. m*N-1; bound each row by T_m.
  auto rec = [&](auto&& self, int pos, int row_left) -> void {
    if (pos == k) {
      out.emplace_back(shape, digits);
      return;
    }
    const int row = pos / N;
    const int col = pos % N;
    const int left = col == 0 ? T[row] : row_left;
    for (int v = 0; v <= left; ++v) {
      digits[pos] = v;
      self(self, pos + 1, left - v);
    }
    digits[pos] = 0;
  };
  rec(rec, 0, 0);
  std::sort(out.begin(), out.end(), GradedLexLess{});
  return out;
}

}  // namespace qims
