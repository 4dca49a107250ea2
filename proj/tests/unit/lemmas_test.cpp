#include <gtest/gtest.h>

#include <random>

#include "qims/errors.hpp"
#include "qims/lemmas.hpp"

namespace qims {
namespace {

using R = Rational;

TEST(Lemmas, AllIdentitiesVanishOnRandomPoints) {
  std::mt19937_64 rng(2024);
  for (int L = 2; L <= 4; ++L) {
    for (int N = 1; N <= 3; ++N) {
      for (LemmaId id : all_lemmas()) {
        if (id == LemmaId::Jacobi && N < 2) continue;
        for (int k = 0; k < 50; ++k) {
          const auto s = random_lemma_sample(L, N, rng);
          ASSERT_EQ(lemma_identity_check(id, s), 0) << lemma_name(id) << " L=" << L << " N=" << N;
        }
      }
    }
  }
}

TEST(Lemmas, JacobiAtAFixedPoint) {
  LemmaSample s;
  s.L = 2;
  s.N = 2;
  s.t = {std::vector<R>{1, R(1, 3)}, std::vector<R>{1, R(1, 2)}};
  s.z = {R(1, 5), R(1, 7)};
  EXPECT_EQ(lemma_identity_check(LemmaId::Jacobi, s), 0);
  // The partial-fraction relation behind it, evaluated directly.
  const R t(1, 3), zi(1, 5), zj(1, 7);
  EXPECT_EQ(t / ((1 - zi * t) * (1 - zj * t)), (1 / (1 - zi * t) - 1 / (1 - zj * t)) / (zi - zj));
}

TEST(Lemmas, F0AtAThreeLevelPoint) {
  LemmaSample s;
  s.L = 3;
  s.N = 1;
  s.t = {std::vector<R>{1, R(3, 4), R(2, 7)}, std::vector<R>{1, R(5, 9), R(1, 8)}};
  s.z = {R(2, 5)};
  EXPECT_EQ(lemma_identity_check(LemmaId::F0, s), 0);
  EXPECT_EQ(lemma_identity_check(LemmaId::LLtN, s), 0);
}

TEST(Lemmas, SingularSamplesAreRejected) {
  LemmaSample s;
  s.L = 2;
  s.N = 1;
  s.t = {std::vector<R>{1, R(1, 3)}, std::vector<R>{1, R(1, 3)}};
  s.z = {R(1, 5)};
  EXPECT_THROW(s.validate(), SingularityError);
  s.t[1][1] = R(1, 2);
  s.z = {R(2)};  // z t = 1 at t = 1/2
  EXPECT_THROW(s.validate(), SingularityError);
}

TEST(Lemmas, JacobiNeedsTwoTimes) {
  std::mt19937_64 rng(1);
  const auto s = random_lemma_sample(2, 1, rng);
  EXPECT_THROW(lemma_identity_check(LemmaId::Jacobi, s), ParameterError);
}

TEST(Lemmas, Names) {
  for (LemmaId id : all_lemmas()) EXPECT_EQ(parse_lemma(lemma_name(id)), id);
  EXPECT_THROW(parse_lemma("nope"), ParameterError);
}

}  // namespace
}  // namespace qims
