#include "rankmod/svd_path.hpp"

#include "rankmod/linalg.hpp"

namespace rankmod {

namespace {

template <FieldScalar Scalar>
void check_operands(const CompactSvd<Scalar>& svd, const Mat<Scalar>& e, const Mat<Scalar>& f) {
  if (e.rows() != svd.n() || f.rows() != svd.n() || e.cols() != svd.k() || f.cols() != svd.k()) {
    throw Error(ErrorKind::DimensionMismatch, "svd path: e and f must be n x k with k = n - rank(A)");
  }
}

}  // namespace

template <FieldScalar Scalar>
StructuredInverse<Scalar> structured_inverse_svd(const CompactSvd<Scalar>& svd, const Mat<Scalar>& e,
                                                 const Mat<Scalar>& f, double pivot_tol) {
  check_operands(svd, e, f);
  const Mat<Scalar> Uk_e = svd.U_k.adjoint() * e;
  const Mat<Scalar> f_Vk = f.adjoint() * svd.V_k;
  const Mat<Scalar> Uk_e_inv = invert_checked(Uk_e, pivot_tol, ErrorKind::PivotSingular, "U_k^* e");
  const Mat<Scalar> f_Vk_inv = invert_checked(f_Vk, pivot_tol, ErrorKind::PivotSingular, "f^* V_k");

  StructuredInverse<Scalar> out;
  out.x = svd.V_k * f_Vk_inv;
  // (e^* U_k)^{-1} = ((U_k^* e)^{-1})^*, so y = U_k (U_k^* e)^{-*}.
  out.y = svd.U_k * Uk_e_inv.adjoint();

  const Mat<Scalar> left = svd.V_r - out.x * (f.adjoint() * svd.V_r);
  const Mat<Scalar> right = svd.U_r.adjoint() - (svd.U_r.adjoint() * e) * out.y.adjoint();
  const Eigen::VectorXd inv_sigma = svd.sigma_r.cwiseInverse();
  out.G.noalias() = left * (inv_sigma.cast<Scalar>().asDiagonal() * right);

  out.diagnostics.path = "svd";
  out.diagnostics.cond_left_pivot = condition_number(Uk_e);
  out.diagnostics.cond_right_pivot = condition_number(f_Vk);
  return out;
}

template <FieldScalar Scalar>
StructuredInverse<Scalar> structured_inverse_svd(const RankModifiedProblem<Scalar>& problem) {
  return structured_inverse_svd(problem.svd(), problem.e(), problem.f(), problem.tol_rank());
}

template <FieldScalar Scalar>
Mat<Scalar> pseudoinverse(const CompactSvd<Scalar>& svd) {
  const Eigen::VectorXd inv_sigma = svd.sigma_r.cwiseInverse();
  return svd.V_r * inv_sigma.cast<Scalar>().asDiagonal() * svd.U_r.adjoint();
}

template <FieldScalar Scalar>
Mat<Scalar> g_from_pseudoinverse(const CompactSvd<Scalar>& svd, const Mat<Scalar>& e, const Mat<Scalar>& f,
                                 double pivot_tol) {
  check_operands(svd, e, f);
  const Mat<Scalar> Uk_e_inv =
      invert_checked<Scalar>(svd.U_k.adjoint() * e, pivot_tol, ErrorKind::PivotSingular, "U_k^* e");
  const Mat<Scalar> f_Vk_inv =
      invert_checked<Scalar>(f.adjoint() * svd.V_k, pivot_tol, ErrorKind::PivotSingular, "f^* V_k");

  const Mat<Scalar> A_pinv = pseudoinverse(svd);
  // (I - P_f) A^+ with P_f = V_k (f^* V_k)^{-1} f^*
  Mat<Scalar> left_projected = A_pinv - (svd.V_k * f_Vk_inv) * (f.adjoint() * A_pinv);
  // ... times (I - P_e) with P_e = e (U_k^* e)^{-1} U_k^*
  Mat<Scalar> G = left_projected - ((left_projected * e) * Uk_e_inv) * svd.U_k.adjoint();
  return G;
}

#define RANKMOD_INSTANTIATE_SVD_PATH(S)                                                                         \
  template StructuredInverse<S> structured_inverse_svd(const RankModifiedProblem<S>&);                          \
  template StructuredInverse<S> structured_inverse_svd(const CompactSvd<S>&, const Mat<S>&, const Mat<S>&, double); \
  template Mat<S> pseudoinverse(const CompactSvd<S>&);                                                          \
  template Mat<S> g_from_pseudoinverse(const CompactSvd<S>&, const Mat<S>&, const Mat<S>&, double);
RANKMOD_INSTANTIATE_SVD_PATH(double)
RANKMOD_INSTANTIATE_SVD_PATH(Complex)

}  // namespace rankmod
