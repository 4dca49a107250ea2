#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "qims/scalar.hpp"

namespace qims {

/// The rational identities behind the closed form of kappa nabla_i phi_A:
/// the four two-copy identities for the C(n, a, b) contractions (split by the
/// relative position of the levels l and n), the l = 0 identity, and the two
/// one-variable relations used to re-expand t/(1 - z_i t).
enum class LemmaId { LLtN, NLtL, OneLtL, LEqN, LEq0, Jacobi, F0 };

const char* lemma_name(LemmaId id);
LemmaId parse_lemma(const std::string& name);
const std::vector<LemmaId>& all_lemmas();

/// Two copies of chain variables t[a][m] (a = 0, 1; m = 0..L-1, t[a][0] = 1)
/// and times z[i-1].
struct LemmaSample {
  int L = 2;
  int N = 1;
  std::array<std::vector<Rational>, 2> t;
  std::vector<Rational> z;

  /// SingularityError if any denominator of the identities vanishes.
  void validate() const;
};

/// Random exact point with coordinates k/997, k in [1, 996], redrawn until
/// it avoids every singular factor.
LemmaSample random_lemma_sample(int L, int N, std::mt19937_64& rng);

/// max |LHS - RHS| over every index choice (n, l, i, j) the identity covers;
/// exactly zero when it holds. Jacobi needs N >= 2.
Rational lemma_identity_check(LemmaId id, const LemmaSample& sample);

}  // namespace qims
