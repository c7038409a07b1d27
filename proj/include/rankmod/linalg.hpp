#pragma once

#include "rankmod/types.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <string>
#include <string_view>

namespace rankmod {

template <FieldScalar Scalar>
Eigen::VectorXd singular_values(const Mat<Scalar>& m) {
  if (m.size() == 0) return Eigen::VectorXd();
  Eigen::BDCSVD<Mat<Scalar>> svd(m);
  return svd.singularValues();
}

/// sigma_max / sigma_min; +inf when the matrix is exactly singular.
template <FieldScalar Scalar>
double condition_number(const Mat<Scalar>& m) {
  const Eigen::VectorXd s = singular_values(m);
  if (s.size() == 0) return 1.0;
  const double smin = s(s.size() - 1);
  return smin > 0.0 ? s(0) / smin : std::numeric_limits<double>::infinity();
}

/// True when sigma_min(m) <= rel_tol * sigma_max(m) (or m is zero).
template <FieldScalar Scalar>
bool numerically_singular(const Mat<Scalar>& m, double rel_tol) {
  const Eigen::VectorXd s = singular_values(m);
  if (s.size() == 0) return false;
  return !(s(0) > 0.0) || s(s.size() - 1) <= rel_tol * s(0);
}

/// Inverse of a small square matrix by LU with partial pivoting, after an
/// SVD singularity test at `rel_tol`. Throws `Error(kind)` on failure.
template <FieldScalar Scalar>
Mat<Scalar> invert_checked(const Mat<Scalar>& m, double rel_tol, ErrorKind kind, std::string_view what) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorKind::DimensionMismatch, std::string(what) + " is not square");
  }
  if (numerically_singular(m, rel_tol)) {
    throw Error(kind, std::string(what) + " is numerically singular");
  }
  return Eigen::PartialPivLU<Mat<Scalar>>(m).inverse();
}

/// Default relative singularity threshold for k x k pivots.
inline double default_pivot_tol(Eigen::Index k) { return static_cast<double>(std::max<Eigen::Index>(k, 1)) * kEps; }

}  // namespace rankmod
