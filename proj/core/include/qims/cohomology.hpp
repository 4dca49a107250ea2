#pragma once

#include <span>
#include <string>

#include "qims/matrix.hpp"
#include "qims/parameters.hpp"

namespace qims {

/// Which reading of the diagonal bracket to use. The printed bracket carries
/// "+ (L - n)"; the corrected reading uses "- (L - n)", which is the one that
/// matches the operator side up to a scalar shift.
enum class DisplayVariant { SignCorrected, Printed };

const char* display_variant_name(DisplayVariant v);
DisplayVariant parse_display_variant(const std::string& name);

/// The matrix P_i(z) of kappa d/dz_i c_A = sum_B (P_i)_{A,B} c_B read off the
/// closed form of kappa z_i nabla_i phi_A in the basis {phi_B : B in A_M}, in
/// the basis order of Space::level(M). Exponents come from dictionary_m.
/// Shifted indices outside A_M are dropped; this happens exactly when the
/// entry being lowered (or A_0 for a raised entry) is zero.
template <Scalar S>
DenseMatrix<S> pfaffian_from_cohomology(const Parameters<S>& params, std::span<const S> z, int M, int i,
                                        DisplayVariant variant = DisplayVariant::SignCorrected);

/// P_i(z) - M_i(z) against the operator-side matrix on V(M). exact is set when
/// the two agree entrywise; otherwise scalar_shift is set when the difference
/// is lambda * identity, and lambda is reported.
template <Scalar S>
struct CohomologyComparison {
  bool exact = false;
  bool scalar_shift = false;
  S lambda{};
  DenseMatrix<S> discrepancy;
  Magnitude<S> max_off_diagonal{};
};

template <Scalar S>
CohomologyComparison<S> compare_with_operator(const Parameters<S>& params, std::span<const S> z, int M, int i,
                                              DisplayVariant variant = DisplayVariant::SignCorrected);

}  // namespace qims
