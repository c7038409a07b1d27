#include "rankmod/problem.hpp"

#include "rankmod/linalg.hpp"

#include <string>

namespace rankmod {

namespace {

std::string dims(const auto& m) { return std::to_string(m.rows()) + "x" + std::to_string(m.cols()); }

// Complement spanning test: sigma_min(pivot) relative to ||block||_2, where
// pivot is U_k^* e or f^* V_k.
template <FieldScalar Scalar>
bool span_deficient(const Mat<Scalar>& pivot, const Mat<Scalar>& block, double tol) {
  const Eigen::VectorXd sp = singular_values(pivot);
  const Eigen::VectorXd sb = singular_values(block);
  if (sb.size() == 0 || !(sb(0) > 0.0)) return true;
  return sp(sp.size() - 1) <= tol * sb(0);
}

}  // namespace

template <FieldScalar Scalar>
RankModifiedProblem<Scalar> validate(Mat<Scalar> A, Mat<Scalar> e, Mat<Scalar> D, Mat<Scalar> f,
                                     std::optional<double> tol_rank) {
  const Eigen::Index n = A.rows();
  const Eigen::Index k = e.cols();
  if (n == 0 || A.cols() != n || e.rows() != n || f.rows() != n || f.cols() != k || D.rows() != k ||
      D.cols() != k) {
    throw Error(ErrorKind::DimensionMismatch, "validate: inconsistent shapes A " + dims(A) + ", e " + dims(e) +
                                                  ", D " + dims(D) + ", f " + dims(f));
  }
  const double tol = tol_rank.value_or(default_rank_tol(n));
  if (!(tol >= 0.0)) {
    throw Error(ErrorKind::InvalidSpec, "validate: tol_rank must be nonnegative");
  }
  if (k < 1 || k >= n) {
    const Eigen::Index rank = numerical_rank(singular_values(A), tol);
    throw Error(ErrorKind::RankOfANotNMinusK,
                "validate: n > k >= 1 required (n=" + std::to_string(n) + ", k=" + std::to_string(k) + ")", rank);
  }

  CompactSvd<Scalar> svd;
  try {
    svd = compact_svd(A, tol);
  } catch (const Error& err) {
    if (err.kind() != ErrorKind::RankOfANotNMinusK) throw;
    throw Error(ErrorKind::RankOfANotNMinusK,
                "validate: rank(A) = " + std::to_string(err.detected_rank().value_or(-1)) + ", expected n - k = " +
                    std::to_string(n - k),
                err.detected_rank());
  }
  if (svd.r() != n - k) {
    throw Error(ErrorKind::RankOfANotNMinusK,
                "validate: rank(A) = " + std::to_string(svd.r()) + ", expected n - k = " + std::to_string(n - k),
                svd.r());
  }
  if (numerically_singular(D, tol)) {
    throw Error(ErrorKind::DSingular, "validate: D is numerically singular");
  }

  const Mat<Scalar> Uk_e = svd.U_k.adjoint() * e;
  const Mat<Scalar> f_Vk = f.adjoint() * svd.V_k;
  if (span_deficient(Uk_e, e, tol)) {
    throw Error(ErrorKind::SpanDeficientE, "validate: columns of e do not complete the column space of A");
  }
  if (span_deficient(f_Vk, f, tol)) {
    throw Error(ErrorKind::SpanDeficientF, "validate: columns of f do not complete the column space of A^*");
  }

  ValidationDiagnostics diag;
  diag.detected_rank = svd.r();
  diag.split_ratio = svd.split_ratio;
  diag.ill_split = svd.ill_split;
  diag.cond_Uk_e = condition_number(Uk_e);
  diag.cond_f_Vk = condition_number(f_Vk);
  diag.cond_D = condition_number(D);

  return RankModifiedProblem<Scalar>(std::move(A), std::move(e), std::move(D), std::move(f), tol, std::move(svd),
                                     diag);
}

template <FieldScalar Scalar>
Mat<Scalar> assemble(const Mat<Scalar>& A, const Mat<Scalar>& e, const Mat<Scalar>& D, const Mat<Scalar>& f) {
  return A + e * D * f.adjoint();
}

template <FieldScalar Scalar>
Mat<Scalar> assemble(const RankModifiedProblem<Scalar>& problem) {
  return assemble(problem.A(), problem.e(), problem.D(), problem.f());
}

template <FieldScalar Scalar>
Mat<Scalar> apply_inverse(const StructuredInverse<Scalar>& inv, const Mat<Scalar>& D, const Mat<Scalar>& b) {
  if (b.rows() != inv.n() || D.rows() != inv.k() || D.cols() != inv.k()) {
    throw Error(ErrorKind::DimensionMismatch, "apply_inverse: b must have n rows and D must be k x k");
  }
  if (numerically_singular(D, default_pivot_tol(D.rows()))) {
    throw Error(ErrorKind::DSingular, "apply_inverse: D is numerically singular");
  }
  const Mat<Scalar> core = Eigen::PartialPivLU<Mat<Scalar>>(D).solve(inv.y.adjoint() * b);
  return inv.G * b + inv.x * core;
}

template <FieldScalar Scalar>
Mat<Scalar> reassemble_inverse(const StructuredInverse<Scalar>& inv, const Mat<Scalar>& D_new) {
  if (D_new.rows() != inv.k() || D_new.cols() != inv.k()) {
    throw Error(ErrorKind::DimensionMismatch, "reassemble_inverse: D must be k x k");
  }
  const Mat<Scalar> D_inv =
      invert_checked(D_new, default_pivot_tol(D_new.rows()), ErrorKind::DSingular, "reassemble_inverse: D");
  Mat<Scalar> out = inv.G;
  out.noalias() += (inv.x * D_inv) * inv.y.adjoint();
  return out;
}

#define RANKMOD_INSTANTIATE_CORE(S)                                                            \
  template RankModifiedProblem<S> validate(Mat<S>, Mat<S>, Mat<S>, Mat<S>, std::optional<double>); \
  template Mat<S> assemble(const RankModifiedProblem<S>&);                                     \
  template Mat<S> assemble(const Mat<S>&, const Mat<S>&, const Mat<S>&, const Mat<S>&);        \
  template Mat<S> apply_inverse(const StructuredInverse<S>&, const Mat<S>&, const Mat<S>&);    \
  template Mat<S> reassemble_inverse(const StructuredInverse<S>&, const Mat<S>&);
RANKMOD_INSTANTIATE_CORE(double)
RANKMOD_INSTANTIATE_CORE(Complex)

}  // namespace rankmod
