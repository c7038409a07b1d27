#include "rankmod/determinant.hpp"

#include "rankmod/linalg.hpp"

#include <cmath>

namespace rankmod {

template <FieldScalar Scalar>
LogDet<Scalar> log_determinant(const Mat<Scalar>& m) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "log_determinant: matrix is not square");
  }
  LogDet<Scalar> out;
  if (m.rows() == 0) return out;

  Eigen::PartialPivLU<Mat<Scalar>> lu(m);
  const auto& packed = lu.matrixLU();
  out.phase = static_cast<Scalar>(lu.permutationP().determinant());
  for (Eigen::Index i = 0; i < packed.rows(); ++i) {
    const Scalar pivot = packed(i, i);
    const double mag = std::abs(pivot);
    if (mag == 0.0) {
      return LogDet<Scalar>{Scalar{0}, -std::numeric_limits<double>::infinity()};
    }
    out.phase *= pivot / mag;
    out.log_abs += std::log(mag);
  }
  return out;
}

template <FieldScalar Scalar>
LogDet<Scalar> log_det_via_lemma(const Mat<Scalar>& A, const Mat<Scalar>& e, const Mat<Scalar>& D,
                                 const Mat<Scalar>& f) {
  const Eigen::Index k = e.cols();
  if (A.rows() != A.cols() || e.rows() != A.rows() || f.rows() != A.rows() || f.cols() != k || D.rows() != k ||
      D.cols() != k) {
    throw Error(ErrorKind::DimensionMismatch, "det_via_lemma: inconsistent shapes");
  }
  LogDet<Scalar> out = log_determinant<Scalar>(A + e * f.adjoint());
  out *= log_determinant(D);
  return out;
}

template <FieldScalar Scalar>
LogDet<Scalar> log_det_inverse_via_lemma(const StructuredInverse<Scalar>& inv, const Mat<Scalar>& D) {
  if (D.rows() != inv.k() || D.cols() != inv.k()) {
    throw Error(ErrorKind::DimensionMismatch, "det_inverse_via_lemma: D must be k x k");
  }
  if (numerically_singular(D, default_pivot_tol(D.rows()))) {
    throw Error(ErrorKind::DSingular, "det_inverse_via_lemma: D is numerically singular");
  }
  LogDet<Scalar> out = log_determinant<Scalar>(inv.G + inv.x * inv.y.adjoint());
  // det(D^{-1}) = 1 / det(D)
  const LogDet<Scalar> dD = log_determinant(D);
  out.phase /= dD.phase;
  out.log_abs -= dD.log_abs;
  return out;
}

#define RANKMOD_INSTANTIATE_DET(S)                                                                     \
  template LogDet<S> log_determinant(const Mat<S>&);                                                   \
  template LogDet<S> log_det_via_lemma(const Mat<S>&, const Mat<S>&, const Mat<S>&, const Mat<S>&);    \
  template LogDet<S> log_det_inverse_via_lemma(const StructuredInverse<S>&, const Mat<S>&);
RANKMOD_INSTANTIATE_DET(double)
RANKMOD_INSTANTIATE_DET(Complex)

}  // namespace rankmod
