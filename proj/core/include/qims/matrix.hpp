#pragma once

#include <cstddef>
#include <vector>

#include "qims/errors.hpp"
#include "qims/scalar.hpp"

namespace qims {

/// Row-major dense matrix, sized for the D x D Pfaffian blocks (D <= a few hundred).
template <Scalar S>
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, from_int<S>(0)) {}

  static DenseMatrix identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t k = 0; k < n; ++k) m(k, k) = from_int<S>(1);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  S& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const S& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  DenseMatrix& operator+=(const DenseMatrix& o) {
    require_same(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
  }
  DenseMatrix& operator-=(const DenseMatrix& o) {
    require_same(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
  }
  DenseMatrix& operator*=(const S& s) {
    for (auto& x : data_) x *= s;
    return *this;
  }
  friend DenseMatrix operator+(DenseMatrix a, const DenseMatrix& b) { return a += b; }
  friend DenseMatrix operator-(DenseMatrix a, const DenseMatrix& b) { return a -= b; }
  friend DenseMatrix operator*(DenseMatrix a, const S& s) { return a *= s; }

  friend DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols_ != b.rows_) throw StructureError("matrix product dimension mismatch");
    DenseMatrix out(a.rows_, b.cols_);
    for (std::size_t r = 0; r < a.rows_; ++r) {
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const S& x = a(r, k);
        if (is_zero(x)) continue;
        for (std::size_t c = 0; c < b.cols_; ++c) out(r, c) += x * b(k, c);
      }
    }
    return out;
  }

  std::vector<S> apply(const std::vector<S>& v) const {
    if (v.size() != cols_) throw StructureError("matrix-vector dimension mismatch");
    std::vector<S> out(rows_, from_int<S>(0));
    for (std::size_t r = 0; r < rows_; ++r) {
      S acc = from_int<S>(0);
      for (std::size_t c = 0; c < cols_; ++c) acc += (*this)(r, c) * v[c];
      out[r] = acc;
    }
    return out;
  }

  Magnitude<S> max_abs() const {
    Magnitude<S> best{0};
    for (const auto& x : data_) {
      Magnitude<S> v = magnitude(x);
      if (v > best) best = v;
    }
    return best;
  }

  friend bool operator==(const DenseMatrix& a, const DenseMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  void require_same(const DenseMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw StructureError("matrix dimension mismatch");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<S> data_;
};

template <Scalar S>
DenseMatrix<S> commutator(const DenseMatrix<S>& a, const DenseMatrix<S>& b) {
  return a * b - b * a;
}

inline DenseMatrix<Complex> to_complex(const DenseMatrix<Rational>& m) {
  DenseMatrix<Complex> out(m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) out(r, c) = Complex(m(r, c).get_d(), 0.0);
  }
  return out;
}

}  // namespace qims
