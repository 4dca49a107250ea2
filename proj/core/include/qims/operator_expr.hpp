#pragma once

#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "qims/errors.hpp"
#include "qims/parameters.hpp"
#include "qims/polynomial.hpp"

namespace qims {

/// Element of the Weyl algebra W_{L,N} written as a tree of scalars, the
/// generators q_m^{(i)} and p_m^{(i)}, sums and ordered products.
///
/// Generators with m = 0 or i = 0 are the derived boundary elements
///   q_0^{(i)} = theta_i + sum_m q_m^{(i)} p_m^{(i)},   p_0^{(i)} = -1,
///   q_m^{(0)} = -1,   p_m^{(0)} = kappa_m + sum_i q_m^{(i)} p_m^{(i)},
///   q_0^{(0)} = kappa_0 - sum theta_i - sum q p,        p_0^{(0)} = -1,
/// and are expanded when applied. A product acts right factor first, so
/// product({a, b, c}) is the composition a o b o c exactly as written.
template <Scalar S>
class OperatorExpr {
 public:
  enum class Kind { Scalar, Q, P, Sum, Product };

  static OperatorExpr scalar(S c) { return OperatorExpr(Node{Kind::Scalar, std::move(c), 0, 0, {}}); }
  static OperatorExpr q(int m, int i) { return OperatorExpr(Node{Kind::Q, from_int<S>(0), m, i, {}}); }
  static OperatorExpr p(int m, int i) { return OperatorExpr(Node{Kind::P, from_int<S>(0), m, i, {}}); }

  static OperatorExpr sum(std::vector<OperatorExpr> terms) {
    std::vector<OperatorExpr> flat;
    for (auto& t : terms) {
      if (t.kind() == Kind::Sum) {
        flat.insert(flat.end(), t.children().begin(), t.children().end());
      } else {
        flat.push_back(std::move(t));
      }
    }
    return OperatorExpr(Node{Kind::Sum, from_int<S>(0), 0, 0, std::move(flat)});
  }

  static OperatorExpr product(std::vector<OperatorExpr> factors) {
    std::vector<OperatorExpr> flat;
    for (auto& f : factors) {
      if (f.kind() == Kind::Product) {
        flat.insert(flat.end(), f.children().begin(), f.children().end());
      } else {
        flat.push_back(std::move(f));
      }
    }
    return OperatorExpr(Node{Kind::Product, from_int<S>(0), 0, 0, std::move(flat)});
  }

  Kind kind() const { return node_->kind; }
  const S& value() const { return node_->value; }
  int level() const { return node_->m; }
  int time() const { return node_->i; }
  std::span<const OperatorExpr> children() const { return node_->children; }

  friend OperatorExpr operator+(OperatorExpr a, OperatorExpr b) { return sum({std::move(a), std::move(b)}); }
  friend OperatorExpr operator*(OperatorExpr a, OperatorExpr b) { return product({std::move(a), std::move(b)}); }
  friend OperatorExpr operator*(S c, OperatorExpr a) { return product({scalar(std::move(c)), std::move(a)}); }
  friend OperatorExpr operator-(OperatorExpr a, OperatorExpr b) {
    return sum({std::move(a), product({scalar(from_int<S>(-1)), std::move(b)})});
  }

 private:
  struct Node {
    Kind kind;
    S value;
    int m;
    int i;
    std::vector<OperatorExpr> children;
  };

  explicit OperatorExpr(Node n) : node_(std::make_shared<const Node>(std::move(n))) {}

  std::shared_ptr<const Node> node_;
};

namespace detail {

/// hbar * sum_{(m,i) in slots} q_m^{(i)} d/dq_m^{(i)}: scales q^A by hbar * (sum of A over the slots).
template <Scalar S, class SlotSum>
Polynomial<S> number_operator(const Polynomial<S>& f, const S& hbar, SlotSum slot_sum) {
  Polynomial<S> out(f.shape());
  for (const auto& [a, c] : f) {
    const int count = slot_sum(a);
    if (count == 0) continue;
    S coeff = c * hbar;
    coeff *= from_int<S>(count);
    out.add_term(a, coeff);
  }
  return out;
}

template <Scalar S>
void check_generator(int m, int i, const Parameters<S>& params) {
  if (m < 0 || m >= params.L || i < 0 || i > params.N) {
    throw StructureError("generator index (m=" + std::to_string(m) + ", i=" + std::to_string(i) +
                         ") out of range for L=" + std::to_string(params.L) + ", N=" + std::to_string(params.N));
  }
}

template <Scalar S>
Polynomial<S> apply_q(int m, int i, const Polynomial<S>& f, const Parameters<S>& params) {
  check_generator(m, i, params);
  const int L = params.L;
  const int N = params.N;
  if (m >= 1 && i >= 1) return f.times_variable(m, i);
  if (m >= 1 && i == 0) return -f;
  if (m == 0 && i >= 1) {
    Polynomial<S> out = f * params.theta[i];
    out += number_operator(f, params.hbar, [&](const MultiIndex& a) {
      int s = 0;
      for (int k = 1; k < L; ++k) s += a(k, i);
      return s;
    });
    return out;
  }
  Polynomial<S> out = f * params.resonance();
  out -= number_operator(f, params.hbar, [&](const MultiIndex& a) { return a.degree(); });
  (void)N;
  return out;
}

template <Scalar S>
Polynomial<S> apply_p(int m, int i, const Polynomial<S>& f, const Parameters<S>& params) {
  check_generator(m, i, params);
  if (m >= 1 && i >= 1) return f.derivative(m, i, params.hbar);
  if (m == 0) return -f;
  Polynomial<S> out = f * params.kappa[m];
  out += number_operator(f, params.hbar, [&](const MultiIndex& a) { return a.level_degree(m); });
  return out;
}

}  // namespace detail

/// Realizes op on polynomials with p_m^{(i)} -> hbar d/dq_m^{(i)}. Exact for
/// rational scalars. Throws StructureError for generator indices outside
/// 0..L-1 x 0..N or a polynomial of a different shape.
template <Scalar S>
Polynomial<S> apply(const OperatorExpr<S>& op, const Polynomial<S>& f, const Parameters<S>& params) {
  using Kind = typename OperatorExpr<S>::Kind;
  if (!(f.shape() == params.shape())) throw StructureError("polynomial shape does not match parameters");
  switch (op.kind()) {
    case Kind::Scalar:
      return f * op.value();
    case Kind::Q:
      return detail::apply_q(op.level(), op.time(), f, params);
    case Kind::P:
      return detail::apply_p(op.level(), op.time(), f, params);
    case Kind::Sum: {
      Polynomial<S> out(f.shape());
      for (const auto& t : op.children()) out += apply(t, f, params);
      return out;
    }
    case Kind::Product: {
      Polynomial<S> g = f;
      auto kids = op.children();
      for (auto it = kids.rbegin(); it != kids.rend(); ++it) {
        if (g.is_zero()) break;
        g = apply(*it, g, params);
      }
      return g;
    }
  }
  throw StructureError("unknown operator node");
}

}  // namespace qims
