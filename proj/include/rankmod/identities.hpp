#pragma once

#include "rankmod/problem.hpp"

#include <array>
#include <string>
#include <string_view>

namespace rankmod {

/// One named relation: Frobenius residual, the operand-norm scale it is
/// judged against, and the verdict under the tolerance that was used.
struct ResidualCheck {
  std::string name;
  double residual = 0.0;
  double scale = 0.0;
  bool pass = false;

  double relative() const { return scale > 0.0 ? residual / scale : residual; }
};

ResidualCheck make_check(std::string name, double residual, double scale, const IdentityTolerance& tol);

/// Residuals of the eight product identities tying (A, e, f) to (G, x, y):
/// A x = 0, y^* A = 0, G e = 0, f^* G = 0, f^* x = I, y^* e = I,
/// A G + e y^* = I, G A + x f^* = I.
struct IdentityReport {
  static constexpr std::array<std::string_view, 8> kNames = {
      "Ax", "yA", "Ge", "fG", "fx_minus_I", "ye_minus_I", "AG_plus_eyStar_minus_I", "GA_plus_xfStar_minus_I"};

  std::array<ResidualCheck, 8> checks;
  IdentityTolerance tolerance;

  bool all_pass() const;
  const ResidualCheck& operator[](std::string_view name) const;
};

/// Penrose conditions (i) AGA = A, (ii) GAG = G, (iii) (AG)^* = AG, (iv) (GA)^* = GA.
struct PenroseReport {
  static constexpr std::array<std::string_view, 4> kNames = {"AGA_minus_A", "GAG_minus_G", "AG_hermitian",
                                                             "GA_hermitian"};
  std::array<ResidualCheck, 4> checks;
  IdentityTolerance tolerance;

  bool all_pass() const;
  /// (i) and (ii) only: what any reflexive generalized inverse satisfies.
  bool reflexive_pass() const { return checks[0].pass && checks[1].pass; }
};

template <FieldScalar Scalar>
IdentityReport check_corollary(const RankModifiedProblem<Scalar>& problem, const StructuredInverse<Scalar>& inv,
                               const IdentityTolerance& tol = {});

/// Errors: DimensionMismatch when A and G are not square of equal size.
template <FieldScalar Scalar>
PenroseReport check_penrose(const Mat<Scalar>& A, const Mat<Scalar>& G, const IdentityTolerance& tol = {});

/// Split of e and f along range(A) / range(A^*) and their complements:
/// e = V1 + W1, f = V2 + W2, C_i = W_i (W_i^* W_i)^{-1}.
template <FieldScalar Scalar>
struct RiedelDecomposition {
  Mat<Scalar> V1, W1, V2, W2, C1, C2;
};

/// Errors: PivotSingular when W_i^* W_i is singular.
template <FieldScalar Scalar>
RiedelDecomposition<Scalar> riedel_decompose(const RankModifiedProblem<Scalar>& problem);

/// (I - C2 V2^*) A^+ (I - V1 C1^*) + C2 D^{-1} C1^*, valid when both the
/// perturbed matrix and D are invertible. Errors: DSingular, PivotSingular.
template <FieldScalar Scalar>
Mat<Scalar> riedel_inverse(const RankModifiedProblem<Scalar>& problem);

/// || A^+ e (U_k^* e)^{-1} U_k^* - A^+ V1 C1^* ||_F, scaled by
/// ||A^+|| ||e|| ||C1||.
template <FieldScalar Scalar>
ResidualCheck nullspace_difference_check(const RankModifiedProblem<Scalar>& problem,
                                         const IdentityTolerance& tol = {});

#define RANKMOD_EXTERN_IDENTITIES(S)                                                                           \
  extern template IdentityReport check_corollary(const RankModifiedProblem<S>&, const StructuredInverse<S>&,  \
                                                 const IdentityTolerance&);                                   \
  extern template PenroseReport check_penrose(const Mat<S>&, const Mat<S>&, const IdentityTolerance&);        \
  extern template RiedelDecomposition<S> riedel_decompose(const RankModifiedProblem<S>&);                     \
  extern template Mat<S> riedel_inverse(const RankModifiedProblem<S>&);                                       \
  extern template ResidualCheck nullspace_difference_check(const RankModifiedProblem<S>&, const IdentityTolerance&);
RANKMOD_EXTERN_IDENTITIES(double)
RANKMOD_EXTERN_IDENTITIES(Complex)
#undef RANKMOD_EXTERN_IDENTITIES

}  // namespace rankmod
