#pragma once

#include "rankmod/compact_svd.hpp"
#include "rankmod/problem.hpp"

namespace rankmod {

/// Builds (G, x, y) from the rank split of A:
///
///   x   = V_k (f^* V_k)^{-1}
///   y^* = (U_k^* e)^{-1} U_k^*
///   G   = (V_r - x f^* V_r) Sigma_r^{-1} (U_r^* - U_r^* e y^*)
///
/// The pivots U_k^* e and f^* V_k are tested at the problem's tol_rank and
/// raise PivotSingular when they fail.
template <FieldScalar Scalar>
StructuredInverse<Scalar> structured_inverse_svd(const RankModifiedProblem<Scalar>& problem);

/// Same construction from an explicit rank split. Any unitary rotation of the
/// U_k, V_k columns yields the same (G, x, y).
template <FieldScalar Scalar>
StructuredInverse<Scalar> structured_inverse_svd(const CompactSvd<Scalar>& svd, const Mat<Scalar>& e,
                                                 const Mat<Scalar>& f, double pivot_tol);

/// A^+ = V_r Sigma_r^{-1} U_r^*.
template <FieldScalar Scalar>
Mat<Scalar> pseudoinverse(const CompactSvd<Scalar>& svd);

/// G = (I - V_k (f^* V_k)^{-1} f^*) A^+ (I - e (U_k^* e)^{-1} U_k^*).
template <FieldScalar Scalar>
Mat<Scalar> g_from_pseudoinverse(const CompactSvd<Scalar>& svd, const Mat<Scalar>& e, const Mat<Scalar>& f,
                                 double pivot_tol);

template <FieldScalar Scalar>
Mat<Scalar> g_from_pseudoinverse(const CompactSvd<Scalar>& svd, const Mat<Scalar>& e, const Mat<Scalar>& f) {
  return g_from_pseudoinverse(svd, e, f, default_rank_tol(svd.n()));
}

#define RANKMOD_EXTERN_SVD_PATH(S)                                                                         \
  extern template StructuredInverse<S> structured_inverse_svd(const RankModifiedProblem<S>&);              \
  extern template StructuredInverse<S> structured_inverse_svd(const CompactSvd<S>&, const Mat<S>&,         \
                                                              const Mat<S>&, double);                      \
  extern template Mat<S> pseudoinverse(const CompactSvd<S>&);                                              \
  extern template Mat<S> g_from_pseudoinverse(const CompactSvd<S>&, const Mat<S>&, const Mat<S>&, double);
RANKMOD_EXTERN_SVD_PATH(double)
RANKMOD_EXTERN_SVD_PATH(Complex)
#undef RANKMOD_EXTERN_SVD_PATH

}  // namespace rankmod
