#pragma once

#include "rankmod/problem.hpp"

namespace rankmod {

/// Free parameters of the SVD-free construction. u, v are n x k with u^* e and
/// f^* v invertible; M is an invertible k x k matrix. N is derived as
/// (f^* v)^{-1} M^{-1} (u^* e)^{-1} and kept for inspection.
template <FieldScalar Scalar>
class AnsatzParams {
 public:
  /// Validates the parameters against the problem's e and f.
  /// Errors: DimensionMismatch, PivotSingular.
  static AnsatzParams create(const RankModifiedProblem<Scalar>& problem, Mat<Scalar> u, Mat<Scalar> v,
                             Mat<Scalar> M);

  /// u = e, v = f, M = I_k.
  static AnsatzParams simplest(const RankModifiedProblem<Scalar>& problem);

  const Mat<Scalar>& u() const noexcept { return u_; }
  const Mat<Scalar>& v() const noexcept { return v_; }
  const Mat<Scalar>& M() const noexcept { return M_; }
  const Mat<Scalar>& N() const noexcept { return N_; }
  const Mat<Scalar>& ue_inv() const noexcept { return ue_inv_; }
  const Mat<Scalar>& fv_inv() const noexcept { return fv_inv_; }
  const Mat<Scalar>& M_inv() const noexcept { return M_inv_; }
  double cond_ue() const noexcept { return cond_ue_; }
  double cond_fv() const noexcept { return cond_fv_; }

 private:
  AnsatzParams() = default;

  Mat<Scalar> u_, v_, M_, N_;
  Mat<Scalar> ue_inv_, fv_inv_, M_inv_;
  double cond_ue_ = 0.0;
  double cond_fv_ = 0.0;
};

/// (G, x, y) without an SVD:
///
///   P_e = I - e (u^* e)^{-1} u^*,  P_v = I - v (f^* v)^{-1} f^*
///   G   = (P_e A P_v + e M f^*)^{-1} - v N u^*
///   x   = (I - G A) v (f^* v)^{-1}
///   y^* = (u^* e)^{-1} u^* (I - A G)
///
/// The same u, v recover x and y. Errors: InnerMatrixSingular when the n x n
/// matrix P_e A P_v + e M f^* fails its LU reciprocal-condition test.
template <FieldScalar Scalar>
StructuredInverse<Scalar> structured_inverse_general(const RankModifiedProblem<Scalar>& problem,
                                                     const AnsatzParams<Scalar>& params);

/// The general construction with u = e, v = f, M = I_k.
template <FieldScalar Scalar>
StructuredInverse<Scalar> structured_inverse_direct(const RankModifiedProblem<Scalar>& problem);

/// G = (A + e M f^*)^{-1} - x M^{-1} y^* for already known x, y.
template <FieldScalar Scalar>
Mat<Scalar> g_from_known_xy(const RankModifiedProblem<Scalar>& problem, const Mat<Scalar>& x, const Mat<Scalar>& y,
                            const Mat<Scalar>& M);

#define RANKMOD_EXTERN_DIRECT(S)                                                                         \
  extern template class AnsatzParams<S>;                                                                 \
  extern template StructuredInverse<S> structured_inverse_general(const RankModifiedProblem<S>&,          \
                                                                  const AnsatzParams<S>&);               \
  extern template StructuredInverse<S> structured_inverse_direct(const RankModifiedProblem<S>&);         \
  extern template Mat<S> g_from_known_xy(const RankModifiedProblem<S>&, const Mat<S>&, const Mat<S>&,   \
                                         const Mat<S>&);
RANKMOD_EXTERN_DIRECT(double)
RANKMOD_EXTERN_DIRECT(Complex)
#undef RANKMOD_EXTERN_DIRECT

}  // namespace rankmod
