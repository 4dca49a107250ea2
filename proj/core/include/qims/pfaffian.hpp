#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "qims/errors.hpp"
#include "qims/hamiltonian.hpp"
#include "qims/matrix.hpp"
#include "qims/ode.hpp"

namespace qims {

/// Finite polynomial subspace: V(M) (total degree <= M) or F(T) (row degree
/// d_m(A) <= T_m).
struct Space {
  enum class Kind { Level, Box };
  Kind kind = Kind::Level;
  int M = 0;
  std::vector<int> T;

  static Space level(int M) { return {Kind::Level, M, {}}; }
  static Space box(std::vector<int> T) { return {Kind::Box, 0, std::move(T)}; }

  std::vector<MultiIndex> basis(int L, int N) const;
  bool contains(const MultiIndex& a) const;
  std::string describe() const;
};

/// H_i q^B has a coefficient on q^A outside the space.
class SubspaceOverflowError : public StructureError {
 public:
  SubspaceOverflowError(const MultiIndex& source, const MultiIndex& target, const std::string& space);
  const MultiIndex& source() const { return source_; }
  const MultiIndex& target() const { return target_; }

 private:
  MultiIndex source_;
  MultiIndex target_;
};

/// Matrix of H_i on the space by direct application to each basis monomial:
/// (M_i)_{A,B} = coefficient of q^A in H_i q^B. Throws SubspaceOverflowError
/// for the first out-of-space coefficient met.
template <Scalar S>
DenseMatrix<S> restrict_hamiltonian(const Parameters<S>& params, std::span<const S> z, const Space& space, int i);

/// The Schroedinger system kappa d/dz_i c = M_i(z) c on a fixed space. The
/// matrices of the z-independent Hamiltonian parts are computed once, so
/// matrix_at only combines them with the weights of z.
template <Scalar S>
class PfaffianSystem {
 public:
  PfaffianSystem(Parameters<S> params, Space space);

  /// Float copy of an exact system (matrices converted entrywise).
  template <Scalar From>
    requires(!std::is_same_v<From, S>)
  explicit PfaffianSystem(const PfaffianSystem<From>& exact);

  const Parameters<S>& params() const { return params_; }
  const Space& space() const { return space_; }
  const std::vector<MultiIndex>& basis() const { return basis_; }
  std::size_t dimension() const { return basis_.size(); }
  std::size_t index_of(const MultiIndex& a) const;

  DenseMatrix<S> matrix_at(int i, std::span<const S> z) const;

  struct Parts {
    DenseMatrix<S> base;
    DenseMatrix<S> pole;
    std::vector<DenseMatrix<S>> exchange;
  };
  const std::vector<Parts>& parts() const { return parts_; }

 private:
  template <Scalar>
  friend class PfaffianSystem;

  PfaffianSystem() = default;

  Parameters<S> params_;
  Space space_;
  std::vector<MultiIndex> basis_;
  std::map<MultiIndex, std::size_t, GradedLexLess> index_;
  std::vector<Parts> parts_;
};

/// Flatness diagnostics at z for the pair (i, j).
struct FlatnessResidual {
  double commutator = 0.0;           // ||[M_i, M_j]||_max (exactly 0 expected)
  bool commutator_exact = false;     // computed in exact arithmetic
  double cross_derivative = 0.0;     // ||d_i M_j - d_j M_i||_max by central differences
  double cross_derivative_relative = 0.0;  // divided by max(||d_i M_j||, ||d_j M_i||)
  double value() const { return std::max(commutator, cross_derivative_relative); }
};

/// z must be real for the finite-difference part (steps are taken along the
/// real axis). Throws SingularityError if any shifted point is not admissible.
template <Scalar S>
FlatnessResidual flatness_residual(const PfaffianSystem<S>& system, std::span<const S> z, int i, int j,
                                   double h = 1e-5);

/// Polygonal path through admissible points of C^N.
struct ZPath {
  std::vector<CVector> waypoints;

  /// Rejects inadmissible waypoints and any segment that passes closer than
  /// guard * (segment length) to a hyperplane z_i = 0, z_i = 1 or z_i = z_j.
  void validate(int N, double guard = 1e-3) const;
  bool closed() const;
};

struct PropagationResult {
  CVector c;
  OdeStats stats;
};

/// Solves dc/ds = (1/kappa) sum_i (dz_i/ds) M_i(z(s)) c segment by segment.
PropagationResult propagate(const PfaffianSystem<Complex>& system, const ZPath& path, CVector c0,
                            const OdeOptions& opts = {});

/// propagate along a closed loop; ParameterError if the loop is not closed.
PropagationResult monodromy_like_transport(const PfaffianSystem<Complex>& system, const ZPath& loop, CVector c0,
                                           const OdeOptions& opts = {});

}  // namespace qims
