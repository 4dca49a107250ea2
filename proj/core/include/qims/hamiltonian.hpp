#pragma once

#include <span>
#include <vector>

#include "qims/operator_expr.hpp"
#include "qims/parameters.hpp"
#include "qims/polynomial.hpp"

namespace qims {

/// Throws SingularityError unless z has N entries with z_i not in {0, 1} and
/// pairwise distinct. Complex values closer than 1e-14 count as equal.
template <Scalar S>
void check_admissible(std::span<const S> z, int N);

/// z_i H_i split by its z-dependence:
///   z_i H_i = base + pole / (z_i - 1) + sum_{j != i} exchange[j-1] * z_j / (z_i - z_j).
/// base holds the e_n group, the m < n chain over j = 0..N and theta_i(e_0 + kappa_0
/// - sum theta); exchange[j-1] holds the four-factor sum together with its
/// scalar -theta_i theta_j. exchange[i-1] is the empty sum.
template <Scalar S>
struct HamiltonianParts {
  OperatorExpr<S> base;
  OperatorExpr<S> pole;
  std::vector<OperatorExpr<S>> exchange;
};

template <Scalar S>
HamiltonianParts<S> hamiltonian_parts(int i, const Parameters<S>& params);

/// Scalar weights of the parts at z: overall 1/z_i, 1/(z_i - 1) and z_j/(z_i - z_j) (0 for j = i).
template <Scalar S>
struct HamiltonianWeights {
  S overall;
  S pole;
  std::vector<S> exchange;
};

template <Scalar S>
HamiltonianWeights<S> hamiltonian_weights(int i, std::span<const S> z);

/// z_i H_i exactly as written: the e_n q p group, the m < n chain over j = 0..N,
/// the 1/(z_i - 1) group through level 0, the z_j/(z_i - z_j) exchange group
/// and the scalar theta_i(...) term. z holds z_1..z_N.
template <Scalar S>
OperatorExpr<S> scaled_hamiltonian(int i, const Parameters<S>& params, std::span<const S> z);

/// H_i = (z_i H_i) / z_i.
template <Scalar S>
OperatorExpr<S> hamiltonian(int i, const Parameters<S>& params, std::span<const S> z);

/// (A^{(i)})_{m,n} = q_m^{(i)} p_n^{(i)}, 0 <= m, n <= L-1.
template <Scalar S>
OperatorExpr<S> ahat_entry(int i, int m, int n);

/// Omega_{i,j} = 1/2 tr(A^{(i)} A^{(j)}) = 1/2 sum_{m,n} A^{(i)}_{m,n} A^{(j)}_{n,m}.
template <Scalar S>
OperatorExpr<S> omega(int i, int j, int L);

template <Scalar S>
OperatorExpr<S> commutator(const OperatorExpr<S>& a, const OperatorExpr<S>& b) {
  return a * b - b * a;
}

/// Max coefficient magnitude of op q^A over the probes.
template <Scalar S>
Magnitude<S> operator_residual(const OperatorExpr<S>& op, const Parameters<S>& params,
                               std::span<const MultiIndex> probes);

/// Max coefficient of (H_i H_j - H_j H_i) q^A over the probes.
template <Scalar S>
Magnitude<S> commutator_residual(int i, int j, const Parameters<S>& params, std::span<const S> z,
                                 std::span<const MultiIndex> probes);

/// Entry positions of two A-hat entries (m, n) and (m', n').
struct AhatPair {
  int m;
  int n;
  int m2;
  int n2;
};

/// Residual of [A^{(i)}_{m,n}, A^{(j)}_{m',n'}]/hbar - delta_{ij}(delta_{n,m'} A^{(i)}_{m,n'}
/// - delta_{n',m} A^{(i)}_{m',n}) on the probes.
template <Scalar S>
Magnitude<S> ahat_commutator_check(int i, int j, AhatPair e, const Parameters<S>& params,
                                   std::span<const MultiIndex> probes);

struct BraidCounts {
  int four_distinct = 0;
  int three_distinct = 0;
};

template <Scalar S>
struct BraidResult {
  Magnitude<S> four_distinct{0};   // [Omega_ij, Omega_kl], i,j,k,l distinct
  Magnitude<S> three_distinct{0};  // [Omega_ij, Omega_ik + Omega_kj], i,j,k distinct
  BraidCounts tested;
};

template <Scalar S>
BraidResult<S> braid_residuals(const Parameters<S>& params, std::span<const MultiIndex> probes);

/// Which transcription of the L = 2 Garnier Hamiltonian to build. `Printed`
/// follows the displayed formula literally; `Corrected` swaps e_0 and e_1 in
/// the last term and puts a factor (z_i - 1) on the two exchange groups, which
/// is the form that agrees with the generic Hamiltonian up to a scalar.
enum class GarnierVariant { Corrected, Printed };

/// z_i (z_i - 1) H_i of the Garnier example (L = 2 only; UnsupportedError otherwise).
template <Scalar S>
OperatorExpr<S> garnier_example(int i, const Parameters<S>& params, std::span<const S> z,
                                GarnierVariant variant = GarnierVariant::Corrected);

template <Scalar S>
struct GarnierResidual {
  S lambda;                 // constant read off the probe q^0
  Magnitude<S> deviation;   // max |coef((D - lambda) q^A)|, D = generic - example
};

template <Scalar S>
GarnierResidual<S> garnier_example_residual(int i, const Parameters<S>& params, std::span<const S> z,
                                            std::span<const MultiIndex> probes,
                                            GarnierVariant variant = GarnierVariant::Corrected);

}  // namespace qims
