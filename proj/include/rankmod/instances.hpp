#pragma once

#include "rankmod/direct_path.hpp"
#include "rankmod/problem.hpp"

#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <variant>

namespace rankmod {

/// Seeded source used for every generated instance.
///
/// Algorithm "mt19937_64/box-muller v1": std::mt19937_64 (bit-exact by the
/// C++ standard) seeded with the 64-bit seed; uniforms take the top 53 bits;
/// normals use Box-Muller on two uniforms, emitting the cosine branch first
/// and the sine branch on the next call.
class Rng {
 public:
  static constexpr std::string_view kAlgorithm = "mt19937_64/box-muller v1";

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on (0, 1].
  double uniform();
  double normal();

  template <FieldScalar Scalar>
  Scalar gaussian_scalar() {
    if constexpr (std::same_as<Scalar, double>) {
      return normal();
    } else {
      const double re = normal();
      const double im = normal();
      return Complex(re, im) / std::numbers::sqrt2;
    }
  }

  /// i.i.d. standard normal entries (complex: real and imaginary parts each
  /// with variance 1/2).
  template <FieldScalar Scalar>
  Mat<Scalar> gaussian(Eigen::Index rows, Eigen::Index cols);

  /// Haar-distributed unitary (orthogonal when real) from QR of a Gaussian
  /// matrix with the diagonal of R normalized to positive reals.
  template <FieldScalar Scalar>
  Mat<Scalar> haar_unitary(Eigen::Index n);

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

struct GeneratorSpec {
  Eigen::Index n = 6;
  Eigen::Index k = 2;
  std::uint64_t seed = 0;
  Field field = Field::real;
  double sigma_spread = 10.0;  // sigma_max / sigma_min of the nonzero spectrum of A
  double coupling = 0.5;       // share of e, f mass inside range(A), range(A^*)
  double d_cond = 10.0;        // condition number of D

  /// Errors: InvalidSpec.
  void check() const;
};

/// Builds A = U_r diag(sigma) V_r^* with sigma log-spaced at random between 1
/// and 1 / sigma_spread (both ends included), e = c U_r R1 + sqrt(1 - c^2) U_k Q,
/// f likewise from the V blocks (R1 Gaussian with unit-variance columns, Q Haar),
/// and D = Q1 diag(1 .. 1/d_cond) Q2^* with log-spaced values.
///
/// Pure function of the spec. Errors: InvalidSpec (including a field that does
/// not match Scalar).
template <FieldScalar Scalar>
RankModifiedProblem<Scalar> generate(const GeneratorSpec& spec);

using AnyProblem = std::variant<RankModifiedProblem<double>, RankModifiedProblem<Complex>>;

/// generate() dispatched on spec.field.
AnyProblem generate_any(const GeneratorSpec& spec);

/// LU inverse of the assembled matrix. Errors: OracleSingular.
template <FieldScalar Scalar>
Mat<Scalar> dense_inverse_oracle(const RankModifiedProblem<Scalar>& problem);

/// Random admissible ansatz parameters: u = e + mix * g_u * ||e|| / ||g_u||
/// (g_u Gaussian), v likewise from f, and M = Q1 diag(1 .. 1/10) Q2^*.
/// Errors: PivotSingular when the draw is not admissible.
template <FieldScalar Scalar>
AnsatzParams<Scalar> random_ansatz(const RankModifiedProblem<Scalar>& problem, std::uint64_t seed, double mix = 0.5);

#define RANKMOD_EXTERN_INSTANCES(S)                                                \
  extern template Mat<S> Rng::gaussian<S>(Eigen::Index, Eigen::Index);             \
  extern template Mat<S> Rng::haar_unitary<S>(Eigen::Index);                       \
  extern template RankModifiedProblem<S> generate<S>(const GeneratorSpec&);        \
  extern template Mat<S> dense_inverse_oracle(const RankModifiedProblem<S>&);    \
  extern template AnsatzParams<S> random_ansatz(const RankModifiedProblem<S>&, std::uint64_t, double);
RANKMOD_EXTERN_INSTANCES(double)
RANKMOD_EXTERN_INSTANCES(Complex)
#undef RANKMOD_EXTERN_INSTANCES

}  // namespace rankmod
