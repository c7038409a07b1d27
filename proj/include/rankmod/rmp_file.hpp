#pragma once

#include "rankmod/problem.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <variant>

namespace rankmod {

/// Contents of an RMP document (version 1):
///
///   { "version": 1, "field": "real" | "complex", "n": n, "k": k,
///     "A": [...n*n], "e": [...n*k], "D": [...k*k], "f": [...n*k],
///     "tol_rank": t,                      (optional)
///     "G": [...], "x": [...], "y": [...], (optional, all three or none)
///     "inverse": [...n*n] }               (optional)
///
/// Arrays are dense row-major. Complex entries are [re, im] pairs.
template <FieldScalar Scalar>
struct RmpData {
  Mat<Scalar> A, e, D, f;
  std::optional<double> tol_rank;
  std::optional<StructuredInverse<Scalar>> inverse;
  std::optional<Mat<Scalar>> dense_inverse;

  Eigen::Index n() const { return A.rows(); }
  Eigen::Index k() const { return e.cols(); }
};

using RmpFile = std::variant<RmpData<double>, RmpData<Complex>>;

inline constexpr int kRmpVersion = 1;

/// Errors: ParseError for a malformed document, a wrong version, or array
/// lengths that disagree with the declared n, k.
RmpFile rmp_from_json(const nlohmann::json& doc);
nlohmann::json rmp_to_json(const RmpFile& file);

RmpFile read_rmp(const std::filesystem::path& path);
/// Serialized text; doubles use the shortest representation that round-trips.
std::string dump_rmp(const RmpFile& file);
void write_rmp(const std::filesystem::path& path, const RmpFile& file);

template <FieldScalar Scalar>
RmpData<Scalar> rmp_from_problem(const RankModifiedProblem<Scalar>& problem) {
  RmpData<Scalar> out;
  out.A = problem.A();
  out.e = problem.e();
  out.D = problem.D();
  out.f = problem.f();
  return out;
}

/// Dense matrix <-> flat row-major JSON array.
template <FieldScalar Scalar>
nlohmann::json matrix_to_json(const Mat<Scalar>& m);

template <FieldScalar Scalar>
Mat<Scalar> matrix_from_json(const nlohmann::json& array, Eigen::Index rows, Eigen::Index cols,
                             std::string_view name);

nlohmann::json scalar_to_json(double value);
nlohmann::json scalar_to_json(Complex value);

}  // namespace rankmod
