#include "rankmod/compact_svd.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <string>

namespace rankmod {

double default_rank_tol(Eigen::Index n) { return static_cast<double>(std::max<Eigen::Index>(n, 1)) * kEps; }

Eigen::Index numerical_rank(const Eigen::VectorXd& singular_values, double tol_rank) {
  if (singular_values.size() == 0 || !(singular_values(0) > 0.0)) return 0;
  const double threshold = tol_rank * singular_values(0);
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < singular_values.size(); ++i) {
    if (singular_values(i) > threshold) ++rank;
  }
  return rank;
}

template <FieldScalar Scalar>
CompactSvd<Scalar> compact_svd(const Mat<Scalar>& A, double tol_rank) {
  if (A.rows() != A.cols() || A.rows() < 2) {
    throw Error(ErrorKind::DimensionMismatch, "compact_svd: A must be square with n >= 2");
  }
  if (!(tol_rank >= 0.0)) {
    throw Error(ErrorKind::InvalidSpec, "compact_svd: tol_rank must be nonnegative");
  }
  const Eigen::Index n = A.rows();
  Eigen::BDCSVD<Mat<Scalar>> svd(A, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::VectorXd& s = svd.singularValues();
  const Eigen::Index r = numerical_rank(s, tol_rank);
  if (r == 0 || r == n) {
    throw Error(ErrorKind::RankOfANotNMinusK,
                "compact_svd: numerical rank " + std::to_string(r) + " of A leaves no split n > k >= 1", r);
  }

  CompactSvd<Scalar> out;
  const Eigen::Index k = n - r;
  out.U_r = svd.matrixU().leftCols(r);
  out.U_k = svd.matrixU().rightCols(k);
  out.V_r = svd.matrixV().leftCols(r);
  out.V_k = svd.matrixV().rightCols(k);
  out.sigma_r = s.head(r);
  out.singular_values = s;
  out.split_ratio = s(r) > 0.0 ? s(r - 1) / s(r) : std::numeric_limits<double>::infinity();
  out.ill_split = out.split_ratio < CompactSvd<Scalar>::kSplitRatioThreshold;
  return out;
}

template CompactSvd<double> compact_svd(const Mat<double>&, double);
template CompactSvd<Complex> compact_svd(const Mat<Complex>&, double);

}  // namespace rankmod
