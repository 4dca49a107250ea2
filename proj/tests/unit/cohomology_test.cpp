#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "qims/cohomology.hpp"
#include "qims/integrals.hpp"
#include "qims/pfaffian.hpp"
#include "random_params.hpp"

namespace qims {
namespace {

using R = Rational;
using RSpan = std::span<const Rational>;

Parameters<R> random_copy_params(int L, int N, int M, std::mt19937_64& rng) {
  std::vector<R> alpha, beta;
  for (int n = 1; n < L; ++n) alpha.push_back(testing::random_rational(rng, -2, 2));
  for (int i = 1; i <= N; ++i) beta.push_back(testing::random_rational(rng, -2, 2, 5));
  return parameters_for_m(L, N, M, alpha, beta, testing::random_rational(rng, -2, 2, 3),
                          testing::random_rational(rng, 1, 3, 2));
}

struct Config {
  int L, N, M;
};

class CohomologyConfigs : public ::testing::TestWithParam<Config> {};

TEST_P(CohomologyConfigs, DiffersFromOperatorByScalar) {
  const auto [L, N, M] = GetParam();
  std::mt19937_64 rng(100 * L + 10 * N + M);
  for (int trial = 0; trial < 3; ++trial) {
    const auto p = random_copy_params(L, N, M, rng);
    const auto z = testing::random_z(N, rng);
    const auto x = dictionary_m(p, M);
    for (int i = 1; i <= N; ++i) {
      const auto r = compare_with_operator(p, RSpan(z), M, i);
      // A vanishing beta_i makes the shift zero.
      EXPECT_EQ(r.exact, x.beta[i - 1] == 0);
      EXPECT_EQ(r.scalar_shift, x.beta[i - 1] != 0);
      EXPECT_EQ(r.max_off_diagonal, 0);
      EXPECT_EQ(r.lambda, M * x.beta[i - 1] / z[i - 1]);
      // Independent operator side: restriction by direct application.
      const auto direct = restrict_hamiltonian(p, RSpan(z), Space::level(M), i);
      auto shifted = pfaffian_from_cohomology(p, RSpan(z), M, i);
      shifted -= DenseMatrix<R>::identity(direct.rows()) * r.lambda;
      EXPECT_EQ(shifted, direct);
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Small, CohomologyConfigs,
                         ::testing::Values(Config{2, 1, 1}, Config{2, 1, 2}, Config{3, 1, 1}, Config{2, 2, 1},
                                           Config{2, 2, 2}, Config{3, 1, 2}, Config{3, 2, 1}, Config{4, 1, 2}));

TEST(Cohomology, PrintedBracketDeviatesOnTheDiagonal) {
  std::mt19937_64 rng(7);
  for (auto [L, N, M] : {Config{2, 1, 2}, Config{3, 2, 1}, Config{3, 1, 2}}) {
    const auto p = random_copy_params(L, N, M, rng);
    const auto z = testing::random_z(N, rng);
    const auto x = dictionary_m(p, M);
    const auto basis = enumerate_basis(L, N, M);
    for (int i = 1; i <= N; ++i) {
      const auto r = compare_with_operator(p, RSpan(z), M, i, DisplayVariant::Printed);
      EXPECT_FALSE(r.exact);
      EXPECT_FALSE(r.scalar_shift);
      EXPECT_EQ(r.max_off_diagonal, 0);
      for (std::size_t k = 0; k < basis.size(); ++k) {
        R shift = 0;
        for (int n = 1; n < L; ++n) shift += 2 * (L - n) * basis[k](n, i);
        EXPECT_EQ(r.discrepancy(k, k), (M * x.beta[i - 1] - shift) / z[i - 1]) << basis[k].to_string();
      }
    }
  }
}

TEST(Cohomology, DiagonalBracketOfTheZFreePart) {
  // For N = 1, z P_{A,A}(z) = D0 + D1/(z - 1); D0 is the first bracket of the closed form.
  std::mt19937_64 rng(8);
  const int L = 3, N = 1, M = 2;
  const auto p = random_copy_params(L, N, M, rng);
  const auto x = dictionary_m(p, M);
  const R za(1, 3), zb(3, 7);
  const auto pa = pfaffian_from_cohomology(p, RSpan(std::vector<R>{za}), M, 1);
  const auto pb = pfaffian_from_cohomology(p, RSpan(std::vector<R>{zb}), M, 1);
  const auto basis = enumerate_basis(L, N, M);
  for (std::size_t k = 0; k < basis.size(); ++k) {
    const R fa = za * pa(k, k) * (za - 1), fb = zb * pb(k, k) * (zb - 1);
    const R d0 = (fb - fa) / (zb - za);
    R want = 0;
    for (int n = 1; n < L; ++n) {
      R bracket = -(L - n) - x.beta[0];
      for (int m = n; m < L; ++m) bracket += x.alpha[m - 1];
      for (int m = 1; m <= n; ++m) bracket += basis[k](m, 1);
      want -= basis[k](n, 1) * bracket;
    }
    EXPECT_EQ(d0, want) << basis[k].to_string();
  }
}

TEST(Cohomology, FloatingPointAgreesWithExact) {
  std::mt19937_64 rng(9);
  const auto p = random_copy_params(3, 2, 1, rng);
  const auto z = testing::random_z(2, rng);
  const auto pc = convert_parameters<Complex>(p);
  const auto zc = convert_points<Complex>(z);
  const auto r = compare_with_operator(pc, std::span<const Complex>(zc), 1, 2);
  EXPECT_TRUE(r.scalar_shift);
  EXPECT_NEAR(r.lambda.real(), R(dictionary_m(p, 1).beta[1] / z[1]).get_d(), 1e-12);
}

TEST(Cohomology, OneCopyGaugedIntegralSolvesTheClosedForm) {
  // P = M_i + (beta_i / z_i) I for M = 1, so z^{beta/kappa} c solves kappa d c = P c when c solves the operator system.
  // kappa = 3 keeps the upper level inside the finite-part window.
  const auto p = parameters_for_m(3, 1, 1, {R(9, 2), R(5)}, {R(1)}, R(-3, 2), R(3));
  const auto x = dictionary_m(p, 1);
  const double expo = R(x.beta[0] / x.planck).get_d();
  const auto integrands = psi1_integrands(dictionary_m1(p));
  QuadratureSpec q;
  q.nodes_per_axis = 32;
  const double z0 = 0.4, h = 1e-3;
  auto gauged = [&](double z) {
    auto c = integrate_chains(integrands, std::vector<double>{z}, q);
    for (auto& v : c) v *= std::pow(z, expo);
    return c;
  };
  const auto c = gauged(z0);
  const auto p1 = gauged(z0 + h), m1 = gauged(z0 - h), p2 = gauged(z0 + 2 * h), m2 = gauged(z0 - 2 * h);
  const auto pc = convert_parameters<Complex>(p);
  const std::vector<Complex> zc{Complex(z0)};
  const auto P = pfaffian_from_cohomology(pc, std::span<const Complex>(zc), 1, 1);
  const auto Pc = P.apply(CVector(c.begin(), c.end()));
  double err = 0, scale = 0;
  for (std::size_t k = 0; k < c.size(); ++k) {
    const double d = (-p2[k] + 8 * p1[k] - 8 * m1[k] + m2[k]) / (12 * h);
    err = std::max(err, std::abs(x.planck.get_d() * d - Pc[k]));
    scale = std::max(scale, std::abs(Pc[k]));
  }
  EXPECT_LT(err / scale, 1e-6);
}

TEST(Cohomology, Preconditions) {
  std::mt19937_64 rng(10);
  const auto p = random_copy_params(3, 1, 2, rng);
  const std::vector<R> z{R(1, 3)};
  EXPECT_THROW(pfaffian_from_cohomology(p, RSpan(z), 1, 1), ParameterError);
  EXPECT_THROW(pfaffian_from_cohomology(p, RSpan(z), 2, 2), StructureError);
  const std::vector<R> pole{R(1)};
  EXPECT_THROW(pfaffian_from_cohomology(p, RSpan(pole), 2, 1), SingularityError);
  EXPECT_EQ(parse_display_variant(display_variant_name(DisplayVariant::Printed)), DisplayVariant::Printed);
  EXPECT_THROW(parse_display_variant("other"), ParameterError);
}

}  // namespace
}  // namespace qims
