#pragma once

#include "rankmod/compact_svd.hpp"
#include "rankmod/types.hpp"

#include <optional>
#include <string>

namespace rankmod {

/// Conditioning figures gathered while validating a problem.
struct ValidationDiagnostics {
  Eigen::Index detected_rank = 0;
  double split_ratio = 0.0;
  bool ill_split = false;
  double cond_Uk_e = 0.0;  // condition number of U_k^* e
  double cond_f_Vk = 0.0;  // condition number of f^* V_k
  double cond_D = 0.0;
};

template <FieldScalar Scalar>
class RankModifiedProblem;

/// Checks every precondition of the structured inverse and returns the validated
/// problem. tol_rank defaults to default_rank_tol(n).
///
/// Errors: DimensionMismatch, RankOfANotNMinusK (with the detected rank),
/// DSingular, SpanDeficientE, SpanDeficientF.
template <FieldScalar Scalar>
RankModifiedProblem<Scalar> validate(Mat<Scalar> A, Mat<Scalar> e, Mat<Scalar> D, Mat<Scalar> f,
                                     std::optional<double> tol_rank = std::nullopt);

/// The quadruple (A, e, D, f) with A of rank n - k and e, f spanning the
/// complements of range(A), range(A^*). Only obtainable through validate(),
/// and immutable afterwards.
template <FieldScalar Scalar>
class RankModifiedProblem {
 public:
  const Mat<Scalar>& A() const noexcept { return A_; }
  const Mat<Scalar>& e() const noexcept { return e_; }
  const Mat<Scalar>& D() const noexcept { return D_; }
  const Mat<Scalar>& f() const noexcept { return f_; }
  Eigen::Index n() const noexcept { return A_.rows(); }
  Eigen::Index k() const noexcept { return e_.cols(); }
  Eigen::Index r() const noexcept { return n() - k(); }
  double tol_rank() const noexcept { return tol_rank_; }
  static constexpr Field field() noexcept { return field_of<Scalar>; }

  const CompactSvd<Scalar>& svd() const noexcept { return svd_; }
  const ValidationDiagnostics& diagnostics() const noexcept { return diagnostics_; }

 private:
  template <FieldScalar S>
  friend RankModifiedProblem<S> validate(Mat<S>, Mat<S>, Mat<S>, Mat<S>, std::optional<double>);

  RankModifiedProblem(Mat<Scalar> A, Mat<Scalar> e, Mat<Scalar> D, Mat<Scalar> f, double tol_rank,
                      CompactSvd<Scalar> svd, ValidationDiagnostics diagnostics)
      : A_(std::move(A)),
        e_(std::move(e)),
        D_(std::move(D)),
        f_(std::move(f)),
        tol_rank_(tol_rank),
        svd_(std::move(svd)),
        diagnostics_(diagnostics) {}

  Mat<Scalar> A_, e_, D_, f_;
  double tol_rank_;
  CompactSvd<Scalar> svd_;
  ValidationDiagnostics diagnostics_;
};

/// Free-form notes attached by the routine that built a StructuredInverse.
struct InverseDiagnostics {
  std::string path;
  std::optional<double> cond_left_pivot;   // u^* e (or U_k^* e)
  std::optional<double> cond_right_pivot;  // f^* v (or f^* V_k)
  std::optional<double> inner_rcond;       // direct path only
};

/// Ainv = G + x * D^{-1} * y^*, with G, x, y independent of D.
template <FieldScalar Scalar>
struct StructuredInverse {
  Mat<Scalar> G;
  Mat<Scalar> x;
  Mat<Scalar> y;
  InverseDiagnostics diagnostics;

  Eigen::Index n() const { return G.rows(); }
  Eigen::Index k() const { return x.cols(); }
};

/// Dense A + e * D * f^*.
template <FieldScalar Scalar>
Mat<Scalar> assemble(const RankModifiedProblem<Scalar>& problem);

/// Same composition on unvalidated operands.
template <FieldScalar Scalar>
Mat<Scalar> assemble(const Mat<Scalar>& A, const Mat<Scalar>& e, const Mat<Scalar>& D, const Mat<Scalar>& f);

/// G * b + x * (D^{-1} * (y^* * b)) without forming the n x n inverse.
template <FieldScalar Scalar>
Mat<Scalar> apply_inverse(const StructuredInverse<Scalar>& inv, const Mat<Scalar>& D, const Mat<Scalar>& b);

/// Dense G + x * D_new^{-1} * y^*: the inverse of A + e * D_new * f^*.
template <FieldScalar Scalar>
Mat<Scalar> reassemble_inverse(const StructuredInverse<Scalar>& inv, const Mat<Scalar>& D_new);

#define RANKMOD_EXTERN_CORE(S)                                                                        \
  extern template RankModifiedProblem<S> validate(Mat<S>, Mat<S>, Mat<S>, Mat<S>, std::optional<double>); \
  extern template Mat<S> assemble(const RankModifiedProblem<S>&);                                     \
  extern template Mat<S> assemble(const Mat<S>&, const Mat<S>&, const Mat<S>&, const Mat<S>&);        \
  extern template Mat<S> apply_inverse(const StructuredInverse<S>&, const Mat<S>&, const Mat<S>&);    \
  extern template Mat<S> reassemble_inverse(const StructuredInverse<S>&, const Mat<S>&);
RANKMOD_EXTERN_CORE(double)
RANKMOD_EXTERN_CORE(Complex)
#undef RANKMOD_EXTERN_CORE

}  // namespace rankmod
