#include "rankmod/types.hpp"

namespace rankmod {

std::string_view to_string(Field field) { return field == Field::real ? "real" : "complex"; }

std::optional<Field> parse_field(std::string_view text) {
  if (text == "real") return Field::real;
  if (text == "complex") return Field::complex;
  return std::nullopt;
}

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::RankOfANotNMinusK: return "RankOfANotNMinusK";
    case ErrorKind::DSingular: return "DSingular";
    case ErrorKind::SpanDeficientE: return "SpanDeficientE";
    case ErrorKind::SpanDeficientF: return "SpanDeficientF";
    case ErrorKind::PivotSingular: return "PivotSingular";
    case ErrorKind::InnerMatrixSingular: return "InnerMatrixSingular";
    case ErrorKind::InvalidSpec: return "InvalidSpec";
    case ErrorKind::OracleSingular: return "OracleSingular";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message, std::optional<long> detected_rank)
    : std::runtime_error(message), kind_(kind), detected_rank_(detected_rank) {}

IdentityTolerance::IdentityTolerance(double abs, double rel) : abs_(abs), rel_(rel) {
  if (!(abs >= 0.0) || !(rel >= 0.0)) {
    throw std::invalid_argument("IdentityTolerance: abs and rel must be nonnegative");
  }
}

}  // namespace rankmod
