#pragma once

#include <Eigen/Dense>

#include <complex>
#include <concepts>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace rankmod {

using Complex = std::complex<double>;

/// The scalar field a problem lives in. Every matrix of one problem shares it.
enum class Field { real, complex };

template <typename T>
concept FieldScalar = std::same_as<T, double> || std::same_as<T, Complex>;

template <FieldScalar Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <FieldScalar Scalar>
inline constexpr Field field_of = std::same_as<Scalar, double> ? Field::real : Field::complex;

std::string_view to_string(Field field);
std::optional<Field> parse_field(std::string_view text);

inline constexpr double kEps = std::numeric_limits<double>::epsilon();

enum class ErrorKind {
  DimensionMismatch,
  RankOfANotNMinusK,
  DSingular,
  SpanDeficientE,
  SpanDeficientF,
  PivotSingular,
  InnerMatrixSingular,
  InvalidSpec,
  OracleSingular,
  ParseError,
};

std::string_view to_string(ErrorKind kind);

/// Thrown by every library operation whose preconditions fail. `detected_rank`
/// is set for RankOfANotNMinusK.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message, std::optional<long> detected_rank = std::nullopt);

  ErrorKind kind() const noexcept { return kind_; }
  std::optional<long> detected_rank() const noexcept { return detected_rank_; }

 private:
  ErrorKind kind_;
  std::optional<long> detected_rank_;
};

/// Residual acceptance rule: residual <= abs + rel * scale, where scale is the
/// product of the operand norms of the relation being checked.
class IdentityTolerance {
 public:
  constexpr IdentityTolerance() = default;
  IdentityTolerance(double abs, double rel);

  double abs() const noexcept { return abs_; }
  double rel() const noexcept { return rel_; }
  bool accepts(double residual, double scale) const noexcept { return residual <= abs_ + rel_ * scale; }

 private:
  double abs_ = 1e-12;
  double rel_ = 1e-12;
};

}  // namespace rankmod
