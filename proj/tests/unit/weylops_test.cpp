#include <gtest/gtest.h>

#include <map>
#include <random>

#include "qims/hamiltonian.hpp"
#include "random_params.hpp"

namespace qims {
namespace {

using Op = OperatorExpr<Rational>;
using RPoly = Polynomial<Rational>;

MultiIndex unit(Shape s, int m, int i, int power = 1) {
  MultiIndex a(s);
  a.set(m, i, power);
  return a;
}

RPoly one(Shape s) { return RPoly::constant(s, 1); }

TEST(Apply, DerivationRule) {
  std::mt19937_64 rng(1);
  auto params = testing::random_parameters(2, 1, rng, std::nullopt, Rational(3, 2));
  const Shape s = params.shape();
  const RPoly out = apply(Op::p(1, 1), RPoly::monomial(unit(s, 1, 1, 2)), params);
  EXPECT_EQ(out, RPoly::monomial(unit(s, 1, 1), 2 * params.hbar));
}

TEST(Apply, BoundaryQAnnihilatesToTheta) {
  std::mt19937_64 rng(2);
  const auto params = testing::random_parameters(3, 2, rng);
  for (int i = 1; i <= 2; ++i) {
    EXPECT_EQ(apply(Op::q(0, i), one(params.shape()), params), RPoly::constant(params.shape(), params.theta[i]));
  }
}

TEST(Apply, BoundaryPMatchesTermByTermExpansion) {
  std::mt19937_64 rng(3);
  const auto params = testing::random_parameters(3, 2, rng, std::nullopt, Rational(2, 3));
  const Shape s = params.shape();
  for (int m = 1; m <= 2; ++m) {
    for (int i = 1; i <= 2; ++i) {
      const RPoly f = RPoly::monomial(unit(s, m, i));
      // kappa_m + sum_j q_m^{(j)} p_m^{(j)}, built from interior generators only.
      std::vector<Op> terms{Op::scalar(params.kappa[m])};
      for (int j = 1; j <= 2; ++j) terms.push_back(Op::q(m, j) * Op::p(m, j));
      const RPoly expected = apply(Op::sum(terms), f, params);
      EXPECT_EQ(apply(Op::p(m, 0), f, params), expected);
      EXPECT_EQ(expected, f * (params.kappa[m] + params.hbar));
    }
  }
}

TEST(Apply, OutOfRangeGeneratorThrows) {
  std::mt19937_64 rng(4);
  const auto params = testing::random_parameters(2, 1, rng);
  EXPECT_THROW(apply(Op::q(2, 1), one(params.shape()), params), StructureError);
  EXPECT_THROW(apply(Op::p(1, 2), one(params.shape()), params), StructureError);
}

TEST(Apply, CanonicalCommutationOnRandomMonomials) {
  std::mt19937_64 rng(5);
  const auto params = testing::random_parameters(3, 2, rng, std::nullopt, Rational(5, 3));
  const Shape s = params.shape();
  const auto basis = enumerate_basis(3, 2, 4);
  std::uniform_int_distribution<std::size_t> pick(0, basis.size() - 1);
  for (int trial = 0; trial < 200; ++trial) {
    const RPoly f = RPoly::monomial(basis[pick(rng)]);
    for (int m = 1; m <= 2; ++m) {
      for (int n = 1; n <= 2; ++n) {
        for (int i = 1; i <= 2; ++i) {
          for (int j = 1; j <= 2; ++j) {
            const RPoly got = apply(commutator(Op::p(m, j), Op::q(n, i)), f, params);
            const RPoly want = (m == n && i == j) ? f * params.hbar : RPoly(s);
            ASSERT_EQ(got, want);
          }
        }
      }
    }
  }
}

// Independent realization for L = 2, N = 1 on one variable q: the operator
// z_1 H_1 expanded by hand, with E = q p acting as hbar k on q^k.
class OneVariable {
 public:
  using Poly = std::map<int, Rational>;
  explicit OneVariable(const Parameters<Rational>& p) : P(p) {}

  Poly E(const Poly& f) const {
    Poly o;
    for (auto [k, c] : f) add(o, k, c * P.hbar * k);
    return o;
  }
  Poly D(const Poly& f) const {
    Poly o;
    for (auto [k, c] : f) {
      if (k > 0) add(o, k - 1, c * P.hbar * k);
    }
    return o;
  }
  Poly Q(const Poly& f) const {
    Poly o;
    for (auto [k, c] : f) add(o, k + 1, c);
    return o;
  }
  Poly scale(const Poly& f, const Rational& s) const {
    Poly o;
    for (auto [k, c] : f) add(o, k, c * s);
    return o;
  }
  static Poly sum(std::initializer_list<Poly> fs) {
    Poly o;
    for (const auto& f : fs) {
      for (auto [k, c] : f) add(o, k, c);
    }
    return o;
  }

  // z_1 H_1 f.
  Poly scaled_h(const Poly& f, const Rational& z) const {
    const Rational th = P.theta[1], k0 = P.kappa[0], k1 = P.kappa[1], e0 = P.e[0], e1 = P.e[1];
    auto q0 = [&](const Poly& g) { return sum({scale(g, th), E(g)}); };       // theta + E
    auto q00 = [&](const Poly& g) { return sum({scale(g, k0 - th), scale(E(g), Rational(-1))}); };
    auto p10 = [&](const Poly& g) { return sum({scale(g, k1), E(g)}); };      // kappa_1 + E
    const Poly t1 = sum({scale(q0(f), -e0), scale(E(f), e1)});
    const Poly t2 = sum({q0(D(f)), scale(q0(E(f)), Rational(-1))});
    const Poly t3 = sum({q0(q00(f)), q0(D(f)), scale(Q(p10(q00(f))), Rational(-1)),
                         scale(Q(p10(D(f))), Rational(-1))});
    const Poly t5 = scale(f, th * (e0 + k0 - th));
    return sum({t1, t2, scale(t3, 1 / (z - 1)), t5});
  }

 private:
  static void add(Poly& o, int k, const Rational& c) {
    o[k] += c;
    if (o[k] == 0) o.erase(k);
  }
  const Parameters<Rational>& P;
};

TEST(Hamiltonian, MatchesHandExpansionForOneVariable) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 5; ++trial) {
    const auto params = testing::random_parameters(2, 1, rng, std::nullopt, testing::random_rational(rng, 1, 2, 3));
    const auto z = testing::random_z(1, rng);
    const Op zh = scaled_hamiltonian(1, params, std::span<const Rational>(z));
    const OneVariable ov(params);
    const Shape s = params.shape();
    for (int k = 0; k <= 4; ++k) {
      const RPoly got = apply(zh, RPoly::monomial(unit(s, 1, 1, k)), params);
      const auto want = ov.scaled_h({{k, Rational(1)}}, z[0]);
      RPoly expected(s);
      for (auto [j, c] : want) expected.add_term(unit(s, 1, 1, j), c);
      EXPECT_EQ(got, expected) << "k=" << k;
    }
  }
}

TEST(Hamiltonian, ConstantProbeHasNoLinearPartUnderZeroResonance) {
  std::mt19937_64 rng(7);
  for (int N = 1; N <= 2; ++N) {
    const auto params = testing::random_parameters(2, N, rng, 0);
    const auto z = testing::random_z(N, rng);
    for (int i = 1; i <= N; ++i) {
      const RPoly out = apply(hamiltonian(i, params, std::span<const Rational>(z)), one(params.shape()), params);
      EXPECT_LE(out.degree(), 0);
    }
  }
}

TEST(Hamiltonian, RaisesDegreeByAtMostOne) {
  std::mt19937_64 rng(8);
  for (int L = 2; L <= 3; ++L) {
    for (int N = 1; N <= 3; ++N) {
      const auto params = testing::random_parameters(L, N, rng);
      const auto z = testing::random_z(N, rng);
      const int max_degree = (L - 1) * N > 4 ? 2 : 3;
      for (int i = 1; i <= N; ++i) {
        const Op h = hamiltonian(i, params, std::span<const Rational>(z));
        for (const auto& a : enumerate_basis(L, N, max_degree)) {
          EXPECT_LE(apply(h, RPoly::monomial(a), params).degree(), a.degree() + 1);
        }
      }
    }
  }
}

TEST(Hamiltonian, LeadingCoefficientOfDegreeRaisingPart) {
  std::mt19937_64 rng(9);
  for (auto [L, N] : {std::pair{2, 1}, {2, 2}, {3, 1}, {3, 2}}) {
    const auto params = testing::random_parameters(L, N, rng);
    const auto z = testing::random_z(N, rng);
    for (int i = 1; i <= N; ++i) {
      const Rational zi = z[i - 1];
      const Op h = hamiltonian(i, params, std::span<const Rational>(z));
      for (const auto& a : enumerate_basis(L, N, 2)) {
        const RPoly out = apply(h, RPoly::monomial(a), params) * (zi * (zi - 1));
        for (int n = 1; n < L; ++n) {
          MultiIndex target = a;
          target.shift(n, i, 1);
          const Rational want = -(params.resonance() - a.degree()) * (params.kappa[n] + a.level_degree(n));
          EXPECT_EQ(out.coefficient(target), want);
        }
      }
    }
  }
}

TEST(Hamiltonian, PolesAreRejected) {
  std::mt19937_64 rng(10);
  const auto params = testing::random_parameters(2, 2, rng);
  const std::vector<Rational> at_zero{0, Rational(1, 2)}, at_one{1, Rational(1, 2)}, equal{Rational(1, 3), Rational(1, 3)};
  EXPECT_THROW(hamiltonian(1, params, std::span<const Rational>(at_zero)), SingularityError);
  EXPECT_THROW(hamiltonian(1, params, std::span<const Rational>(at_one)), SingularityError);
  EXPECT_THROW(hamiltonian(1, params, std::span<const Rational>(equal)), SingularityError);
}

TEST(Commutativity, SameIndexIsZero) {
  std::mt19937_64 rng(11);
  const auto params = testing::random_parameters(3, 2, rng);
  const auto z = testing::random_z(2, rng);
  const auto probes = enumerate_basis(3, 2, 2);
  EXPECT_EQ(commutator_residual(1, 1, params, std::span<const Rational>(z), std::span<const MultiIndex>(probes)), 0);
}

TEST(Commutativity, ExactOnSmallModels) {
  std::mt19937_64 rng(12);
  for (auto [L, N, deg] : {std::tuple{2, 2, 3}, {3, 3, 2}}) {
    const auto params = testing::random_parameters(L, N, rng, std::nullopt, testing::random_rational(rng, 1, 2, 3));
    const auto z = testing::random_z(N, rng);
    const auto probes = enumerate_basis(L, N, deg);
    for (int i = 1; i <= N; ++i) {
      for (int j = i + 1; j <= N; ++j) {
        EXPECT_EQ(commutator_residual(i, j, params, std::span<const Rational>(z), std::span<const MultiIndex>(probes)),
                  0)
            << L << N << i << j;
      }
    }
  }
}

TEST(Commutativity, PerturbedHamiltonianFails) {
  // Adding q_1^{(1)} p_1^{(2)} to H_1 breaks the commutation, so the probe sweep can detect it.
  std::mt19937_64 rng(13);
  const auto params = testing::random_parameters(2, 2, rng);
  const auto z = testing::random_z(2, rng);
  const auto probes = enumerate_basis(2, 2, 2);
  const Op h1 = hamiltonian(1, params, std::span<const Rational>(z)) + Op::q(1, 1) * Op::p(1, 2);
  const Op h2 = hamiltonian(2, params, std::span<const Rational>(z));
  EXPECT_GT(operator_residual(commutator(h1, h2), params, std::span<const MultiIndex>(probes)), 0);
}

TEST(AhatCommutators, InteriorEntries) {
  std::mt19937_64 rng(14);
  const auto params = testing::random_parameters(3, 2, rng, std::nullopt, Rational(3, 2));
  const auto probes = enumerate_basis(3, 2, 3);
  const std::span<const MultiIndex> pr(probes);
  EXPECT_EQ(ahat_commutator_check(1, 2, {1, 2, 2, 1}, params, pr), 0);
  EXPECT_EQ(ahat_commutator_check(1, 1, {1, 1, 1, 1}, params, pr), 0);
  EXPECT_EQ(ahat_commutator_check(1, 1, {1, 2, 2, 1}, params, pr), 0);
  for (int m = 1; m <= 2; ++m) {
    for (int n = 1; n <= 2; ++n) {
      for (int m2 = 1; m2 <= 2; ++m2) {
        for (int n2 = 1; n2 <= 2; ++n2) {
          EXPECT_EQ(ahat_commutator_check(2, 2, {m, n, m2, n2}, params, pr), 0);
        }
      }
    }
  }
}

TEST(Braid, InfinitesimalRelations) {
  std::mt19937_64 rng(15);
  for (auto [L, N] : {std::pair{2, 3}, {3, 3}, {2, 4}}) {
    const auto params = testing::random_parameters(L, N, rng);
    const auto probes = enumerate_basis(L, N, 2);
    const auto r = braid_residuals(params, std::span<const MultiIndex>(probes));
    EXPECT_EQ(r.four_distinct, 0);
    EXPECT_EQ(r.three_distinct, 0);
    EXPECT_GT(r.tested.three_distinct, 0);
    if (N >= 4) {
      EXPECT_GT(r.tested.four_distinct, 0);
    }
  }
}

TEST(Garnier, CorrectedFormDiffersByAScalar) {
  std::mt19937_64 rng(16);
  for (int N = 1; N <= 2; ++N) {
    const auto params = testing::random_parameters(2, N, rng, std::nullopt, testing::random_rational(rng, 1, 2, 3));
    const auto z = testing::random_z(N, rng);
    const auto probes = enumerate_basis(2, N, N == 1 ? 3 : 2);
    for (int i = 1; i <= N; ++i) {
      const auto r = garnier_example_residual(i, params, std::span<const Rational>(z),
                                              std::span<const MultiIndex>(probes));
      EXPECT_EQ(r.deviation, 0) << N << i;
    }
  }
}

TEST(Garnier, ConstantProbeOnlyIsTriviallyZero) {
  std::mt19937_64 rng(17);
  const auto params = testing::random_parameters(2, 1, rng);
  const auto z = testing::random_z(1, rng);
  const std::vector<MultiIndex> probes{MultiIndex(params.shape())};
  const auto r = garnier_example_residual(1, params, std::span<const Rational>(z),
                                          std::span<const MultiIndex>(probes));
  EXPECT_EQ(r.deviation, 0);
}

TEST(Garnier, PrintedFormDeviates) {
  std::mt19937_64 rng(18);
  const auto params = testing::random_parameters(2, 2, rng);
  const auto z = testing::random_z(2, rng);
  const auto probes = enumerate_basis(2, 2, 2);
  const auto r = garnier_example_residual(1, params, std::span<const Rational>(z), std::span<const MultiIndex>(probes),
                                          GarnierVariant::Printed);
  EXPECT_GT(r.deviation, 0);
}

TEST(Garnier, RequiresTwoLevels) {
  std::mt19937_64 rng(19);
  const auto params = testing::random_parameters(3, 1, rng);
  const auto z = testing::random_z(1, rng);
  EXPECT_THROW(garnier_example(1, params, std::span<const Rational>(z)), UnsupportedError);
}

}  // namespace
}  // namespace qims
