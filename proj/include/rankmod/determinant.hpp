#pragma once

#include "rankmod/problem.hpp"

#include <cmath>

namespace rankmod {

/// det(M) = phase * exp(log_abs). phase has unit modulus, or is 0 when M is
/// exactly singular (log_abs is then -inf).
template <FieldScalar Scalar>
struct LogDet {
  Scalar phase{1};
  double log_abs = 0.0;

  /// The plain determinant; overflows to +-inf / underflows to 0 outside the
  /// double range.
  Scalar value() const { return phase * std::exp(log_abs); }

  LogDet& operator*=(const LogDet& other) {
    phase *= other.phase;
    log_abs += other.log_abs;
    return *this;
  }
};

/// Determinant by LU with partial pivoting (pivot product and permutation parity).
template <FieldScalar Scalar>
LogDet<Scalar> log_determinant(const Mat<Scalar>& m);

template <FieldScalar Scalar>
Scalar determinant(const Mat<Scalar>& m) {
  return log_determinant(m).value();
}

/// det(A + e f^*) * det(D), on raw operands. No invertibility is required.
template <FieldScalar Scalar>
LogDet<Scalar> log_det_via_lemma(const Mat<Scalar>& A, const Mat<Scalar>& e, const Mat<Scalar>& D,
                                 const Mat<Scalar>& f);

template <FieldScalar Scalar>
LogDet<Scalar> log_det_via_lemma(const RankModifiedProblem<Scalar>& problem) {
  return log_det_via_lemma(problem.A(), problem.e(), problem.D(), problem.f());
}

template <FieldScalar Scalar>
Scalar det_via_lemma(const RankModifiedProblem<Scalar>& problem) {
  return log_det_via_lemma(problem).value();
}

/// det(G + x y^*) * det(D^{-1}). Errors: DSingular.
template <FieldScalar Scalar>
LogDet<Scalar> log_det_inverse_via_lemma(const StructuredInverse<Scalar>& inv, const Mat<Scalar>& D);

template <FieldScalar Scalar>
Scalar det_inverse_via_lemma(const StructuredInverse<Scalar>& inv, const Mat<Scalar>& D) {
  return log_det_inverse_via_lemma(inv, D).value();
}

#define RANKMOD_EXTERN_DET(S)                                                                                \
  extern template LogDet<S> log_determinant(const Mat<S>&);                                                  \
  extern template LogDet<S> log_det_via_lemma(const Mat<S>&, const Mat<S>&, const Mat<S>&, const Mat<S>&);   \
  extern template LogDet<S> log_det_inverse_via_lemma(const StructuredInverse<S>&, const Mat<S>&);
RANKMOD_EXTERN_DET(double)
RANKMOD_EXTERN_DET(Complex)
#undef RANKMOD_EXTERN_DET

}  // namespace rankmod
