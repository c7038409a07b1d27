#include "rankmod/direct_path.hpp"

#include "rankmod/linalg.hpp"

#include <algorithm>

namespace rankmod {

namespace {

template <FieldScalar Scalar>
Eigen::PartialPivLU<Mat<Scalar>> factor_inner(const Mat<Scalar>& inner, double tol, double& rcond) {
  Eigen::PartialPivLU<Mat<Scalar>> lu(inner);
  rcond = lu.rcond();
  if (!(rcond > tol)) {
    throw Error(ErrorKind::InnerMatrixSingular,
                "direct path: inner n x n matrix is numerically singular (rcond " + std::to_string(rcond) + ")");
  }
  return lu;
}

template <FieldScalar Scalar>
double inner_tol(const RankModifiedProblem<Scalar>& problem) {
  return std::max(problem.tol_rank(), kEps);
}

}  // namespace

template <FieldScalar Scalar>
AnsatzParams<Scalar> AnsatzParams<Scalar>::create(const RankModifiedProblem<Scalar>& problem, Mat<Scalar> u,
                                                  Mat<Scalar> v, Mat<Scalar> M) {
  const Eigen::Index n = problem.n();
  const Eigen::Index k = problem.k();
  if (u.rows() != n || u.cols() != k || v.rows() != n || v.cols() != k || M.rows() != k || M.cols() != k) {
    throw Error(ErrorKind::DimensionMismatch, "AnsatzParams: u, v must be n x k and M must be k x k");
  }
  const double tol = problem.tol_rank();
  const Mat<Scalar> ue = u.adjoint() * problem.e();
  const Mat<Scalar> fv = problem.f().adjoint() * v;

  AnsatzParams p;
  p.ue_inv_ = invert_checked(ue, tol, ErrorKind::PivotSingular, "u^* e");
  p.fv_inv_ = invert_checked(fv, tol, ErrorKind::PivotSingular, "f^* v");
  p.M_inv_ = invert_checked(M, tol, ErrorKind::PivotSingular, "M");
  p.N_ = p.fv_inv_ * p.M_inv_ * p.ue_inv_;
  p.cond_ue_ = condition_number(ue);
  p.cond_fv_ = condition_number(fv);
  p.u_ = std::move(u);
  p.v_ = std::move(v);
  p.M_ = std::move(M);
  return p;
}

template <FieldScalar Scalar>
AnsatzParams<Scalar> AnsatzParams<Scalar>::simplest(const RankModifiedProblem<Scalar>& problem) {
  return create(problem, problem.e(), problem.f(), Mat<Scalar>::Identity(problem.k(), problem.k()));
}

template <FieldScalar Scalar>
StructuredInverse<Scalar> structured_inverse_general(const RankModifiedProblem<Scalar>& problem,
                                                     const AnsatzParams<Scalar>& params) {
  const Mat<Scalar>& A = problem.A();
  const Mat<Scalar>& e = problem.e();
  const Mat<Scalar>& f = problem.f();
  const Mat<Scalar>& u = params.u();
  const Mat<Scalar>& v = params.v();

  // w = (u^* e)^{-1} u^*  (k x n),  z = v (f^* v)^{-1}  (n x k)
  const Mat<Scalar> w = params.ue_inv() * u.adjoint();
  const Mat<Scalar> z = v * params.fv_inv();

  // P_e A P_v + e M f^*, formed with rank-k corrections only.
  Mat<Scalar> inner = A - e * (w * A);
  inner -= (inner * z) * f.adjoint();
  inner.noalias() += (e * params.M()) * f.adjoint();

  double rcond = 0.0;
  const auto lu = factor_inner(inner, inner_tol(problem), rcond);

  StructuredInverse<Scalar> out;
  out.G = lu.inverse();
  out.G.noalias() -= (v * params.N()) * u.adjoint();
  out.x = z - out.G * (A * z);
  const Mat<Scalar> y_star = w - (w * A) * out.G;
  out.y = y_star.adjoint();

  out.diagnostics.path = "general";
  out.diagnostics.cond_left_pivot = params.cond_ue();
  out.diagnostics.cond_right_pivot = params.cond_fv();
  out.diagnostics.inner_rcond = rcond;
  return out;
}

template <FieldScalar Scalar>
StructuredInverse<Scalar> structured_inverse_direct(const RankModifiedProblem<Scalar>& problem) {
  auto out = structured_inverse_general(problem, AnsatzParams<Scalar>::simplest(problem));
  out.diagnostics.path = "direct";
  return out;
}

template <FieldScalar Scalar>
Mat<Scalar> g_from_known_xy(const RankModifiedProblem<Scalar>& problem, const Mat<Scalar>& x, const Mat<Scalar>& y,
                            const Mat<Scalar>& M) {
  const Eigen::Index n = problem.n();
  const Eigen::Index k = problem.k();
  if (x.rows() != n || x.cols() != k || y.rows() != n || y.cols() != k || M.rows() != k || M.cols() != k) {
    throw Error(ErrorKind::DimensionMismatch, "g_from_known_xy: x, y must be n x k and M must be k x k");
  }
  const Mat<Scalar> M_inv = invert_checked(M, problem.tol_rank(), ErrorKind::PivotSingular, "M");
  const Mat<Scalar> shifted = assemble(problem.A(), problem.e(), M, problem.f());
  double rcond = 0.0;
  const auto lu = factor_inner(shifted, inner_tol(problem), rcond);
  Mat<Scalar> G = lu.inverse();
  G.noalias() -= (x * M_inv) * y.adjoint();
  return G;
}

#define RANKMOD_INSTANTIATE_DIRECT(S)                                                                          \
  template class AnsatzParams<S>;                                                                             \
  template StructuredInverse<S> structured_inverse_general(const RankModifiedProblem<S>&, const AnsatzParams<S>&); \
  template StructuredInverse<S> structured_inverse_direct(const RankModifiedProblem<S>&);                      \
  template Mat<S> g_from_known_xy(const RankModifiedProblem<S>&, const Mat<S>&, const Mat<S>&, const Mat<S>&);
RANKMOD_INSTANTIATE_DIRECT(double)
RANKMOD_INSTANTIATE_DIRECT(Complex)

}  // namespace rankmod
