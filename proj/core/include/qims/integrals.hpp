#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "qims/exponents.hpp"
#include "qims/forms.hpp"
#include "qims/pfaffian.hpp"
#include "qims/quadrature.hpp"

namespace qims {

struct QuadratureSpec {
  enum class Scheme { GaussJacobiTensor, TanhSinhTensor, MonteCarlo };
  Scheme scheme = Scheme::GaussJacobiTensor;
  int nodes_per_axis = 24;
  std::uint64_t mc_samples = 1'000'000;
  std::uint64_t seed = 20240601;
  double doubling_tolerance = 1e-10;  // relative change allowed between n and 2n nodes
};

const char* scheme_name(QuadratureSpec::Scheme s);
QuadratureSpec::Scheme parse_scheme(const std::string& name);

/// Integrand on the ordered chain 1 = s_0 > s_1 > ... > s_K > 0 written in
/// the coordinates s_k = s_{k-1} u_k, u in (0,1)^K. Each term is a constant
/// times a product of powers of s_p, of differences (s_p - s_q) with p < q
/// (s_0 = 1) and of the smooth factors (1 - z_i s_p).
struct ChainFactor {
  enum class Kind { Power, Diff, Linear };
  Kind kind;
  int p;
  int q;  // Diff: second variable; Linear: time index i (1-based)
  double e;
};

struct ChainTerm {
  double coeff = 1.0;
  std::vector<ChainFactor> factors;
};

struct ChainIntegrand {
  int K = 0;
  std::vector<ChainTerm> terms;

  /// Endpoint exponents of axis k (1-based) for one term, Jacobian included:
  /// u_k^{a} near u_k = 0 and (1-u_k)^{b} near u_k = 1.
  static std::pair<double, double> axis_exponents(const ChainTerm& term, int K, int k);
  /// Smallest exponents over all terms; DomainError if any is <= -1.
  std::vector<std::pair<double, double>> worst_exponents() const;
};

/// Adds (merges) a factor, dropping exponents that cancel to zero.
void add_factor(ChainTerm& term, ChainFactor f);

struct IntegralResult {
  std::vector<MultiIndex> basis;
  std::vector<double> c;        // c_A in basis order
  std::vector<double> error;    // node-doubling change (tensor) or standard error (Monte Carlo)
  double max_relative_error = 0.0;
  bool converged = true;
  int nodes = 0;
  std::uint64_t samples = 0;
};

/// Integrals of several chain integrands at z with a fixed rule (no doubling).
/// Tensor schemes use each integrand's own worst exponents; Monte Carlo shares
/// one sample stream across all integrands, drawn with the exponents that are
/// worst over all of them, so equal seeds give common random numbers in z.
std::vector<double> integrate_chains(const std::vector<ChainIntegrand>& integrands, std::span<const double> z,
                                     const QuadratureSpec& quad, std::vector<double>* std_error = nullptr);

/// The chain integrands of c_emptyset = int U phi_0 and c_{(n,i)} = -int U phi_n^{(i)}
/// on 1 > t_1 > ... > t_{L-1} > 0, in the order of enumerate_basis(L, N, 1).
std::vector<ChainIntegrand> psi1_integrands(const ExponentsM1<Rational>& exps);

/// The chain integrands of c_A = int U phi_A (A in enumerate_basis(L, N, M)),
/// with the symmetrisation over S_M^{L-1} written out term by term. The region
/// is 1 > t_1^{(a)} > ... > t_{L-1}^{(a)} > 0 for every copy a together with
/// t_n^{(1)} > ... > t_n^{(M)} on every level, integrated as the sum over its
/// total orders; weight bases are taken in absolute value.
std::vector<ChainIntegrand> psim_integrands(const ExponentsM<Rational>& exps);

/// One term sigma(phi_A) per permutation tuple, not summed; used to check the
/// symmetrisation bookkeeping.
std::vector<ChainIntegrand> psim_unsymmetrized(const ExponentsM<Rational>& exps, const MultiIndex& a);

/// Coefficients of Psi_1 at real z (z_i < 1), with node doubling for tensor
/// rules: the rule at n and 2n nodes is compared and the 2n result returned.
/// Throws ConvergenceError if the relative change exceeds the tolerance.
IntegralResult eval_psi1(const Parameters<Rational>& params, std::span<const double> z, const QuadratureSpec& quad);

/// Coefficients of Psi_M (same conventions). Monte Carlo reports standard errors.
IntegralResult eval_psim(const Parameters<Rational>& params, std::span<const double> z, int M,
                         const QuadratureSpec& quad);

/// Fourth-order central difference residual of kappa d/dz_i c = M_i(z) c:
/// max|kappa D_h c - M_i c| / max|M_i c|.
struct PdeResidual {
  double absolute = 0.0;
  double relative = 0.0;
};

using CoefficientFn = std::function<std::vector<double>(std::span<const double>)>;

PdeResidual schroedinger_residual(const PfaffianSystem<Complex>& system, std::span<const double> z, int i,
                                  const CoefficientFn& coefficients, double h);

}  // namespace qims
