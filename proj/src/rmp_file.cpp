#include "rankmod/rmp_file.hpp"

#include <fstream>
#include <sstream>
#include <string>

namespace rankmod {

using nlohmann::json;

namespace {

[[noreturn]] void parse_fail(const std::string& message) { throw Error(ErrorKind::ParseError, message); }

template <FieldScalar Scalar>
Scalar entry_from_json(const json& v, std::string_view name) {
  if constexpr (std::same_as<Scalar, double>) {
    if (!v.is_number()) parse_fail(std::string(name) + ": real entries must be numbers");
    return v.get<double>();
  } else {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
      parse_fail(std::string(name) + ": complex entries must be [re, im] pairs");
    }
    return Complex(v[0].get<double>(), v[1].get<double>());
  }
}

Eigen::Index dimension(const json& doc, const char* key) {
  if (!doc.contains(key) || !doc[key].is_number_integer()) parse_fail(std::string("missing integer \"") + key + "\"");
  const auto value = doc[key].get<long long>();
  if (value < 0) parse_fail(std::string("\"") + key + "\" must be nonnegative");
  return static_cast<Eigen::Index>(value);
}

template <FieldScalar Scalar>
RmpData<Scalar> data_from_json(const json& doc) {
  const Eigen::Index n = dimension(doc, "n");
  const Eigen::Index k = dimension(doc, "k");
  auto required = [&](const char* key, Eigen::Index rows, Eigen::Index cols) {
    if (!doc.contains(key)) parse_fail(std::string("missing array \"") + key + "\"");
    return matrix_from_json<Scalar>(doc[key], rows, cols, key);
  };

  RmpData<Scalar> out;
  out.A = required("A", n, n);
  out.e = required("e", n, k);
  out.D = required("D", k, k);
  out.f = required("f", n, k);
  if (doc.contains("tol_rank")) {
    if (!doc["tol_rank"].is_number()) parse_fail("\"tol_rank\" must be a number");
    out.tol_rank = doc["tol_rank"].get<double>();
  }
  const int present = int(doc.contains("G")) + int(doc.contains("x")) + int(doc.contains("y"));
  if (present == 3) {
    StructuredInverse<Scalar> inv;
    inv.G = required("G", n, n);
    inv.x = required("x", n, k);
    inv.y = required("y", n, k);
    inv.diagnostics.path = "stored";
    out.inverse = std::move(inv);
  } else if (present != 0) {
    parse_fail("G, x and y must be stored together");
  }
  if (doc.contains("inverse")) out.dense_inverse = required("inverse", n, n);
  return out;
}

template <FieldScalar Scalar>
json data_to_json(const RmpData<Scalar>& data) {
  json doc;
  doc["version"] = kRmpVersion;
  doc["field"] = std::string(to_string(field_of<Scalar>));
  doc["n"] = data.n();
  doc["k"] = data.k();
  doc["A"] = matrix_to_json(data.A);
  doc["e"] = matrix_to_json(data.e);
  doc["D"] = matrix_to_json(data.D);
  doc["f"] = matrix_to_json(data.f);
  if (data.tol_rank) doc["tol_rank"] = *data.tol_rank;
  if (data.inverse) {
    doc["G"] = matrix_to_json(data.inverse->G);
    doc["x"] = matrix_to_json(data.inverse->x);
    doc["y"] = matrix_to_json(data.inverse->y);
  }
  if (data.dense_inverse) doc["inverse"] = matrix_to_json(*data.dense_inverse);
  return doc;
}

}  // namespace

json scalar_to_json(double value) { return value; }
json scalar_to_json(Complex value) { return json::array({value.real(), value.imag()}); }

template <FieldScalar Scalar>
json matrix_to_json(const Mat<Scalar>& m) {
  json out = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) out.push_back(scalar_to_json(m(i, j)));
  }
  return out;
}

template <FieldScalar Scalar>
Mat<Scalar> matrix_from_json(const json& array, Eigen::Index rows, Eigen::Index cols, std::string_view name) {
  if (!array.is_array()) parse_fail(std::string(name) + ": expected an array");
  if (static_cast<Eigen::Index>(array.size()) != rows * cols) {
    parse_fail(std::string(name) + ": expected " + std::to_string(rows * cols) + " entries, found " +
               std::to_string(array.size()));
  }
  Mat<Scalar> out(rows, cols);
  std::size_t idx = 0;
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) out(i, j) = entry_from_json<Scalar>(array[idx++], name);
  }
  return out;
}

template json matrix_to_json(const Mat<double>&);
template json matrix_to_json(const Mat<Complex>&);
template Mat<double> matrix_from_json(const json&, Eigen::Index, Eigen::Index, std::string_view);
template Mat<Complex> matrix_from_json(const json&, Eigen::Index, Eigen::Index, std::string_view);

RmpFile rmp_from_json(const json& doc) {
  if (!doc.is_object()) parse_fail("RMP document must be a JSON object");
  if (!doc.contains("version") || !doc["version"].is_number_integer() ||
      doc["version"].get<long long>() != kRmpVersion) {
    parse_fail("RMP version must equal " + std::to_string(kRmpVersion));
  }
  if (!doc.contains("field") || !doc["field"].is_string()) parse_fail("missing string \"field\"");
  const auto field = parse_field(doc["field"].get<std::string>());
  if (!field) parse_fail("\"field\" must be \"real\" or \"complex\"");
  if (*field == Field::real) return data_from_json<double>(doc);
  return data_from_json<Complex>(doc);
}

json rmp_to_json(const RmpFile& file) {
  return std::visit([](const auto& data) { return data_to_json(data); }, file);
}

RmpFile read_rmp(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) parse_fail("cannot open " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& err) {
    parse_fail(path.string() + ": " + err.what());
  }
  return rmp_from_json(doc);
}

std::string dump_rmp(const RmpFile& file) { return rmp_to_json(file).dump(1) + "\n"; }

void write_rmp(const std::filesystem::path& path, const RmpFile& file) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::ParseError, "cannot write " + path.string());
  out << dump_rmp(file);
  if (!out) throw Error(ErrorKind::ParseError, "write failed for " + path.string());
}

}  // namespace rankmod
