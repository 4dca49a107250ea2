#pragma once

#include <map>
#include <utility>

#include "qims/errors.hpp"
#include "qims/multi_index.hpp"
#include "qims/scalar.hpp"

namespace qims {

/// Sparse polynomial in the variables q_m^{(i)} of a fixed Shape. Zero
/// coefficients are never stored, so iteration visits exactly the support in
/// graded-lex order.
template <Scalar S>
class Polynomial {
 public:
  using Terms = std::map<MultiIndex, S, GradedLexLess>;

  explicit Polynomial(Shape shape) : shape_(shape) { shape_.validate(); }

  static Polynomial monomial(const MultiIndex& a, const S& coeff = from_int<S>(1)) {
    Polynomial p(a.shape());
    p.add_term(a, coeff);
    return p;
  }

  static Polynomial constant(Shape shape, const S& c) {
    Polynomial p(shape);
    p.add_term(MultiIndex(shape), c);
    return p;
  }

  const Shape& shape() const { return shape_; }
  const Terms& terms() const { return terms_; }
  auto begin() const { return terms_.begin(); }
  auto end() const { return terms_.end(); }
  std::size_t term_count() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  /// Zero scalar when A is absent.
  S coefficient(const MultiIndex& a) const {
    auto it = terms_.find(a);
    return it == terms_.end() ? from_int<S>(0) : it->second;
  }

  /// Max d(A) over the support; -1 for the zero polynomial.
  int degree() const {
    return terms_.empty() ? -1 : terms_.rbegin()->first.degree();
  }

  void add_term(const MultiIndex& a, const S& c) {
    if (!(a.shape() == shape_)) throw StructureError("monomial shape does not match polynomial");
    if (qims::is_zero(c)) return;
    auto [it, inserted] = terms_.try_emplace(a, c);
    if (!inserted) {
      it->second += c;
      if (qims::is_zero(it->second)) terms_.erase(it);
    }
  }

  Polynomial& operator+=(const Polynomial& o) {
    require_same_shape(o);
    for (const auto& [a, c] : o.terms_) add_term(a, c);
    return *this;
  }

  Polynomial& operator-=(const Polynomial& o) {
    require_same_shape(o);
    for (const auto& [a, c] : o.terms_) add_term(a, -c);
    return *this;
  }

  Polynomial& operator*=(const S& s) {
    if (qims::is_zero(s)) {
      terms_.clear();
      return *this;
    }
    for (auto it = terms_.begin(); it != terms_.end();) {
      it->second *= s;
      if (qims::is_zero(it->second)) {
        it = terms_.erase(it);
      } else {
        ++it;
      }
    }
    return *this;
  }

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, const S& s) { return a *= s; }
  friend Polynomial operator*(const S& s, Polynomial a) { return a *= s; }
  Polynomial operator-() const { return *this * from_int<S>(-1); }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    a.require_same_shape(b);
    Polynomial out(a.shape_);
    for (const auto& [ia, ca] : a.terms_) {
      for (const auto& [ib, cb] : b.terms_) {
        MultiIndex prod = ia;
        for (int k = 0; k < ia.size(); ++k) {
          const int m = k / a.shape_.N + 1;
          const int i = k % a.shape_.N + 1;
          prod.shift(m, i, ib.entry(k));
        }
        out.add_term(prod, S(ca * cb));
      }
    }
    return out;
  }

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.shape_ == b.shape_ && a.terms_ == b.terms_;
  }

  /// q_m^{(i)} * f.
  Polynomial times_variable(int m, int i) const {
    Polynomial out(shape_);
    for (const auto& [a, c] : terms_) {
      MultiIndex b = a;
      b.shift(m, i, 1);
      out.terms_.emplace_hint(out.terms_.end(), b, c);
    }
    return out;
  }

  /// scale * d f / d q_m^{(i)}.
  Polynomial derivative(int m, int i, const S& scale) const {
    Polynomial out(shape_);
    if (qims::is_zero(scale)) return out;
    for (const auto& [a, c] : terms_) {
      const int e = a(m, i);
      if (e == 0) continue;
      MultiIndex b = a;
      b.shift(m, i, -1);
      S coeff = c * scale;
      coeff *= from_int<S>(e);
      out.add_term(b, coeff);
    }
    return out;
  }

  Magnitude<S> max_abs_coefficient() const {
    Magnitude<S> best{0};
    for (const auto& [a, c] : terms_) {
      Magnitude<S> v = magnitude(c);
      if (v > best) best = v;
    }
    return best;
  }

 private:
  void require_same_shape(const Polynomial& o) const {
    if (!(o.shape_ == shape_)) throw StructureError("polynomials live in different (L, N) contexts");
  }

  Shape shape_;
  Terms terms_;
};

}  // namespace qims
