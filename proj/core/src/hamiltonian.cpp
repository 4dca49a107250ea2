#include "qims/hamiltonian.hpp"

#include <string>

#include "qims/parallel.hpp"

namespace qims {

namespace {

template <Scalar S>
bool coincide(const S& a, const S& b) {
  if constexpr (is_exact_v<S>) {
    return a == b;
  } else {
    return std::abs(a - b) < 1e-14;
  }
}

template <Scalar S>
using Op = OperatorExpr<S>;

template <Scalar S>
Op<S> q(int m, int i) {
  return Op<S>::q(m, i);
}

template <Scalar S>
Op<S> p(int m, int i) {
  return Op<S>::p(m, i);
}

template <Scalar S>
Op<S> c(const S& v) {
  return Op<S>::scalar(v);
}

void check_time(int i, int N) {
  if (i < 1 || i > N) throw StructureError("time index " + std::to_string(i) + " out of range 1.." + std::to_string(N));
}

}  // namespace

template <Scalar S>
void check_admissible(std::span<const S> z, int N) {
  if (static_cast<int>(z.size()) != N) {
    throw ParameterError("expected " + std::to_string(N) + " z values, got " + std::to_string(z.size()));
  }
  const S zero = from_int<S>(0);
  const S one = from_int<S>(1);
  for (int a = 0; a < N; ++a) {
    if (coincide(z[a], zero)) throw SingularityError("z_" + std::to_string(a + 1) + " = 0 is a pole");
    if (coincide(z[a], one)) throw SingularityError("z_" + std::to_string(a + 1) + " = 1 is a pole");
    for (int b = a + 1; b < N; ++b) {
      if (coincide(z[a], z[b])) {
        throw SingularityError("z_" + std::to_string(a + 1) + " = z_" + std::to_string(b + 1) + " is a pole");
      }
    }
  }
}

template <Scalar S>
HamiltonianParts<S> hamiltonian_parts(int i, const Parameters<S>& params) {
  const int L = params.L;
  const int N = params.N;
  check_time(i, N);
  std::vector<Op<S>> base;
  for (int n = 0; n < L; ++n) base.push_back(Op<S>::product({c(params.e[n]), q<S>(n, i), p<S>(n, i)}));
  for (int j = 0; j <= N; ++j) {
    for (int m = 0; m < L; ++m) {
      for (int n = m + 1; n < L; ++n) {
        base.push_back(Op<S>::product({q<S>(m, i), p<S>(m, j), q<S>(n, j), p<S>(n, i)}));
      }
    }
  }
  S tail = params.e[0] + params.kappa[0];
  for (int j = 1; j <= N; ++j) tail -= params.theta[j];
  base.push_back(c<S>(params.theta[i] * tail));

  std::vector<Op<S>> pole;
  for (int m = 0; m < L; ++m) {
    for (int n = 0; n < L; ++n) pole.push_back(Op<S>::product({q<S>(m, i), p<S>(m, 0), q<S>(n, 0), p<S>(n, i)}));
  }

  HamiltonianParts<S> out{Op<S>::sum(std::move(base)), Op<S>::sum(std::move(pole)), {}};
  for (int j = 1; j <= N; ++j) {
    std::vector<Op<S>> ex;
    if (j != i) {
      for (int m = 0; m < L; ++m) {
        for (int n = 0; n < L; ++n) ex.push_back(Op<S>::product({q<S>(m, i), p<S>(n, i), q<S>(n, j), p<S>(m, j)}));
      }
      ex.push_back(c<S>(-(params.theta[i] * params.theta[j])));
    }
    out.exchange.push_back(Op<S>::sum(std::move(ex)));
  }
  return out;
}

template <Scalar S>
HamiltonianWeights<S> hamiltonian_weights(int i, std::span<const S> z) {
  const S one = from_int<S>(1);
  const S& zi = z[i - 1];
  HamiltonianWeights<S> w{one / zi, one / (zi - one), {}};
  for (std::size_t j = 0; j < z.size(); ++j) {
    w.exchange.push_back(static_cast<int>(j) + 1 == i ? from_int<S>(0) : z[j] / (zi - z[j]));
  }
  return w;
}

template <Scalar S>
Op<S> scaled_hamiltonian(int i, const Parameters<S>& params, std::span<const S> z) {
  check_time(i, params.N);
  check_admissible(z, params.N);
  const HamiltonianParts<S> parts = hamiltonian_parts(i, params);
  const HamiltonianWeights<S> w = hamiltonian_weights(i, z);
  std::vector<Op<S>> terms{parts.base, c<S>(w.pole) * parts.pole};
  for (int j = 1; j <= params.N; ++j) {
    if (j != i) terms.push_back(c<S>(w.exchange[j - 1]) * parts.exchange[j - 1]);
  }
  return Op<S>::sum(std::move(terms));
}

template <Scalar S>
Op<S> hamiltonian(int i, const Parameters<S>& params, std::span<const S> z) {
  Op<S> scaled = scaled_hamiltonian(i, params, z);
  return Op<S>::product({c<S>(from_int<S>(1) / z[i - 1]), scaled});
}

template <Scalar S>
Op<S> ahat_entry(int i, int m, int n) {
  return q<S>(m, i) * p<S>(n, i);
}

template <Scalar S>
Op<S> omega(int i, int j, int L) {
  std::vector<Op<S>> terms;
  for (int m = 0; m < L; ++m) {
    for (int n = 0; n < L; ++n) terms.push_back(ahat_entry<S>(i, m, n) * ahat_entry<S>(j, n, m));
  }
  S half = from_int<S>(1);
  half /= from_int<S>(2);
  return half * Op<S>::sum(std::move(terms));
}

template <Scalar S>
Magnitude<S> operator_residual(const Op<S>& op, const Parameters<S>& params, std::span<const MultiIndex> probes) {
  std::vector<Magnitude<S>> per(probes.size(), Magnitude<S>{0});
  parallel_for(probes.size(), [&](std::size_t k) {
    per[k] = apply(op, Polynomial<S>::monomial(probes[k]), params).max_abs_coefficient();
  });
  Magnitude<S> best{0};
  for (const auto& v : per) {
    if (v > best) best = v;
  }
  return best;
}

template <Scalar S>
Magnitude<S> commutator_residual(int i, int j, const Parameters<S>& params, std::span<const S> z,
                                 std::span<const MultiIndex> probes) {
  const Op<S> hi = hamiltonian(i, params, z);
  const Op<S> hj = hamiltonian(j, params, z);
  if (i == j) return Magnitude<S>{0};
  return operator_residual(commutator(hi, hj), params, probes);
}

template <Scalar S>
Magnitude<S> ahat_commutator_check(int i, int j, AhatPair e, const Parameters<S>& params,
                                   std::span<const MultiIndex> probes) {
  const int L = params.L;
  for (int v : {e.m, e.n, e.m2, e.n2}) {
    if (v < 0 || v >= L) throw StructureError("A-hat entry index out of range");
  }
  check_time(i, params.N);
  check_time(j, params.N);
  const S inv_hbar = from_int<S>(1) / params.hbar;
  std::vector<Op<S>> terms{inv_hbar * commutator(ahat_entry<S>(i, e.m, e.n), ahat_entry<S>(j, e.m2, e.n2))};
  if (i == j) {
    if (e.n == e.m2) terms.push_back(from_int<S>(-1) * ahat_entry<S>(i, e.m, e.n2));
    if (e.n2 == e.m) terms.push_back(ahat_entry<S>(i, e.m2, e.n));
  }
  return operator_residual(Op<S>::sum(std::move(terms)), params, probes);
}

template <Scalar S>
BraidResult<S> braid_residuals(const Parameters<S>& params, std::span<const MultiIndex> probes) {
  const int N = params.N;
  const int L = params.L;
  BraidResult<S> out;
  for (int i = 1; i <= N; ++i) {
    for (int j = 1; j <= N; ++j) {
      if (j == i) continue;
      for (int k = 1; k <= N; ++k) {
        if (k == i || k == j) continue;
        const Op<S> lhs = commutator(omega<S>(i, j, L), omega<S>(i, k, L) + omega<S>(k, j, L));
        const Magnitude<S> r = operator_residual(lhs, params, probes);
        if (r > out.three_distinct) out.three_distinct = r;
        ++out.tested.three_distinct;
        for (int l = k + 1; l <= N; ++l) {
          if (l == i || l == j || i > j) continue;
          const Magnitude<S> r4 = operator_residual(commutator(omega<S>(i, j, L), omega<S>(k, l, L)), params, probes);
          if (r4 > out.four_distinct) out.four_distinct = r4;
          ++out.tested.four_distinct;
        }
      }
    }
  }
  return out;
}

template <Scalar S>
Op<S> garnier_example(int i, const Parameters<S>& params, std::span<const S> z, GarnierVariant variant) {
  if (params.L != 2) throw UnsupportedError("the Garnier example is stated for L = 2 only");
  const int N = params.N;
  check_time(i, N);
  check_admissible(z, N);
  const bool corrected = variant == GarnierVariant::Corrected;
  const S one = from_int<S>(1);
  const S zi = z[i - 1];
  const S& hbar = params.hbar;

  auto num = [&](int j) { return q<S>(1, j) * p<S>(1, j); };
  auto shifted_num = [&](int j) { return c<S>(params.theta[j]) + num(j); };
  std::vector<Op<S>> total_terms;
  for (int j = 1; j <= N; ++j) total_terms.push_back(num(j));
  const Op<S> total = Op<S>::sum(total_terms);

  std::vector<Op<S>> terms;
  terms.push_back(Op<S>::product({q<S>(1, i), c<S>(params.kappa[1] - params.theta[0]) + total,
                                  c<S>(params.kappa[1]) + total}));
  terms.push_back(Op<S>::product({c<S>(zi), shifted_num(i), p<S>(1, i)}));
  for (int j = 1; j <= N; ++j) {
    if (j == i) continue;
    const S zj = z[j - 1];
    const S factor = corrected ? zi - one : one;
    const S w1 = -(zj * factor / (zi - zj));
    const S w2 = -(zi * factor / (zi - zj));
    const S w3 = -(zi * (zj - one) / (zj - zi));
    terms.push_back(Op<S>::product({c<S>(w1), shifted_num(j), q<S>(1, i), p<S>(1, j)}));
    terms.push_back(Op<S>::product({c<S>(w2), shifted_num(i), q<S>(1, j), p<S>(1, i)}));
    terms.push_back(Op<S>::product({c<S>(w3), shifted_num(i), q<S>(1, j), p<S>(1, j)}));
    terms.push_back(Op<S>::product({c<S>(w3), shifted_num(j), q<S>(1, i), p<S>(1, i)}));
  }
  terms.push_back(Op<S>::product({c<S>(-(zi + one)), shifted_num(i), q<S>(1, i), p<S>(1, i)}));
  const S de = corrected ? params.e[0] - params.e[1] : params.e[1] - params.e[0];
  const S last = de * zi - de - hbar + params.kappa[1] - params.kappa[0];
  terms.push_back(Op<S>::product({c<S>(-last), q<S>(1, i), p<S>(1, i)}));
  return Op<S>::sum(std::move(terms));
}

template <Scalar S>
GarnierResidual<S> garnier_example_residual(int i, const Parameters<S>& params, std::span<const S> z,
                                            std::span<const MultiIndex> probes, GarnierVariant variant) {
  const Op<S> example = garnier_example(i, params, z, variant);
  const S zi = z[i - 1];
  const Op<S> generic = Op<S>::product({c<S>(zi - from_int<S>(1)), scaled_hamiltonian(i, params, z)});
  const Op<S> diff = generic - example;
  const Polynomial<S> at_one = apply(diff, Polynomial<S>::constant(params.shape(), from_int<S>(1)), params);
  GarnierResidual<S> out{at_one.coefficient(MultiIndex(params.shape())), Magnitude<S>{0}};
  const Op<S> shifted = diff - c<S>(out.lambda);
  const Magnitude<S> r = operator_residual(shifted, params, probes);
  // The constant probe itself may carry non-constant terms.
  const Magnitude<S> r1 = (at_one - Polynomial<S>::constant(params.shape(), out.lambda)).max_abs_coefficient();
  out.deviation = r > r1 ? r : r1;
  return out;
}

#define QIMS_INSTANTIATE(S)                                                                                       \
  template void check_admissible<S>(std::span<const S>, int);                                                    \
  template HamiltonianParts<S> hamiltonian_parts<S>(int, const Parameters<S>&);                                 \
  template HamiltonianWeights<S> hamiltonian_weights<S>(int, std::span<const S>);                                \
  template OperatorExpr<S> scaled_hamiltonian<S>(int, const Parameters<S>&, std::span<const S>);                 \
  template OperatorExpr<S> hamiltonian<S>(int, const Parameters<S>&, std::span<const S>);                        \
  template OperatorExpr<S> ahat_entry<S>(int, int, int);                                                         \
  template OperatorExpr<S> omega<S>(int, int, int);                                                              \
  template Magnitude<S> operator_residual<S>(const OperatorExpr<S>&, const Parameters<S>&,                        \
                                             std::span<const MultiIndex>);                                       \
  template Magnitude<S> commutator_residual<S>(int, int, const Parameters<S>&, std::span<const S>,               \
                                               std::span<const MultiIndex>);                                     \
  template Magnitude<S> ahat_commutator_check<S>(int, int, AhatPair, const Parameters<S>&,                        \
                                                 std::span<const MultiIndex>);                                   \
  template BraidResult<S> braid_residuals<S>(const Parameters<S>&, std::span<const MultiIndex>);                 \
  template OperatorExpr<S> garnier_example<S>(int, const Parameters<S>&, std::span<const S>, GarnierVariant);    \
  template GarnierResidual<S> garnier_example_residual<S>(int, const Parameters<S>&, std::span<const S>,          \
                                                          std::span<const MultiIndex>, GarnierVariant);

QIMS_INSTANTIATE(Rational)
QIMS_INSTANTIATE(Complex)

#undef QIMS_INSTANTIATE

}  // namespace qims
