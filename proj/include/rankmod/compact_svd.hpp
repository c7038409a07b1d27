#pragma once

#include "rankmod/types.hpp"

namespace rankmod {

/// Rank split of A = U_r * diag(sigma_r) * V_r^*. U_k and V_k are orthonormal
/// bases of the complements of range(A) and range(A^*) (the latter is null(A)).
template <FieldScalar Scalar>
struct CompactSvd {
  Mat<Scalar> U_r;
  Eigen::VectorXd sigma_r;  // positive, non-increasing
  Mat<Scalar> V_r;
  Mat<Scalar> U_k;
  Mat<Scalar> V_k;

  Eigen::VectorXd singular_values;  // all n values of A
  /// sigma_r / sigma_{r+1}; +inf when sigma_{r+1} is exactly zero.
  double split_ratio = 0.0;
  /// Set when split_ratio falls below kSplitRatioThreshold.
  bool ill_split = false;

  static constexpr double kSplitRatioThreshold = 1e3;

  Eigen::Index n() const { return U_r.rows(); }
  Eigen::Index r() const { return U_r.cols(); }
  Eigen::Index k() const { return U_k.cols(); }

  Mat<Scalar> sigma_matrix() const { return sigma_r.cast<Scalar>().asDiagonal(); }
};

/// Default relative rank threshold: n * machine epsilon.
double default_rank_tol(Eigen::Index n);

/// Count of singular values above tol_rank * sigma_max.
Eigen::Index numerical_rank(const Eigen::VectorXd& singular_values, double tol_rank);

/// Full SVD of square A split at its numerical rank r. Throws RankOfANotNMinusK
/// when r is 0 or n (no k >= 1 with r = n - k and r >= 1).
template <FieldScalar Scalar>
CompactSvd<Scalar> compact_svd(const Mat<Scalar>& A, double tol_rank);

extern template CompactSvd<double> compact_svd(const Mat<double>&, double);
extern template CompactSvd<Complex> compact_svd(const Mat<Complex>&, double);

}  // namespace rankmod
