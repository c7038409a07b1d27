#include "rankmod/cli.hpp"

#include "rankmod/bench.hpp"
#include "rankmod/determinant.hpp"
#include "rankmod/direct_path.hpp"
#include "rankmod/identities.hpp"
#include "rankmod/instances.hpp"
#include "rankmod/linalg.hpp"
#include "rankmod/rmp_file.hpp"
#include "rankmod/svd_path.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <functional>
#include <iostream>

namespace rankmod::cli {

using nlohmann::json;

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ParseError:
    case ErrorKind::InvalidSpec:
      return kParseError;
    case ErrorKind::DimensionMismatch:
    case ErrorKind::RankOfANotNMinusK:
    case ErrorKind::DSingular:
    case ErrorKind::SpanDeficientE:
    case ErrorKind::SpanDeficientF:
      return kValidationError;
    case ErrorKind::PivotSingular:
    case ErrorKind::InnerMatrixSingular:
    case ErrorKind::OracleSingular:
      return kNumericalError;
  }
  return kNumericalError;
}

namespace {

struct InvertOptions {
  std::string input;
  std::string out;
  std::string path = "svd";
  std::optional<double> tol_rank;
  std::uint64_t seed = 0;
};

struct CheckOptions {
  std::string input;
  double tol = 1e-12;
  double penrose_tol = 1e-11;
  double riedel_tol = 1e-9;
  std::optional<double> tol_rank;
};

struct DetOptions {
  std::string input;
  std::optional<double> tol_rank;
};

struct GenOptions {
  GeneratorSpec spec;
  std::string field = "real";
  std::string out;
};

template <FieldScalar Scalar>
RankModifiedProblem<Scalar> validated(const RmpData<Scalar>& data, std::optional<double> tol_rank) {
  return validate(data.A, data.e, data.D, data.f, tol_rank ? tol_rank : data.tol_rank);
}

json check_json(const ResidualCheck& c) {
  return {{"residual", c.residual}, {"scale", c.scale}, {"relative", c.relative()}, {"pass", c.pass}};
}

json validation_json(const ValidationDiagnostics& d) {
  return {{"detected_rank", d.detected_rank}, {"split_ratio", d.split_ratio}, {"ill_split", d.ill_split},
          {"cond_Uk_e", d.cond_Uk_e},         {"cond_f_Vk", d.cond_f_Vk},     {"cond_D", d.cond_D}};
}

json inverse_json(const InverseDiagnostics& d) {
  json out = {{"path", d.path}};
  if (d.cond_left_pivot) out["cond_left_pivot"] = *d.cond_left_pivot;
  if (d.cond_right_pivot) out["cond_right_pivot"] = *d.cond_right_pivot;
  if (d.inner_rcond) out["inner_rcond"] = *d.inner_rcond;
  return out;
}

template <FieldScalar Scalar>
StructuredInverse<Scalar> build_inverse(const RankModifiedProblem<Scalar>& problem, const std::string& path,
                                        std::uint64_t seed) {
  if (path == "direct") return structured_inverse_direct(problem);
  if (path == "general") return structured_inverse_general(problem, random_ansatz(problem, seed));
  return structured_inverse_svd(problem);
}

template <FieldScalar Scalar>
double relative_gap(const Mat<Scalar>& a, const Mat<Scalar>& ref) {
  const double scale = ref.norm();
  return scale > 0.0 ? (a - ref).norm() / scale : (a - ref).norm();
}

template <FieldScalar Scalar>
int invert(const RmpData<Scalar>& data, const InvertOptions& opts, std::ostream& out) {
  const auto problem = validated(data, opts.tol_rank);
  const auto inv = build_inverse(problem, opts.path, opts.seed);
  const Mat<Scalar> dense = reassemble_inverse(inv, problem.D());
  const Mat<Scalar> tilde = assemble(problem);
  const Mat<Scalar> I = Mat<Scalar>::Identity(problem.n(), problem.n());

  json report = {
      {"command", "invert"},
      {"field", std::string(to_string(field_of<Scalar>))},
      {"n", problem.n()},
      {"k", problem.k()},
      {"path", opts.path},
      {"residual", (tilde * dense - I).norm()},
      {"residual_left", (dense * tilde - I).norm()},
      {"cond_tilde", condition_number(tilde)},
      {"validation", validation_json(problem.diagnostics())},
      {"inverse", inverse_json(inv.diagnostics)},
  };

  const std::string reference = opts.path == "svd" ? "direct" : "svd";
  try {
    const auto ref = build_inverse(problem, reference, opts.seed);
    report["agreement"] = {{"reference_path", reference},
                           {"G_relative", relative_gap(inv.G, ref.G)},
                           {"x_relative", relative_gap(inv.x, ref.x)},
                           {"y_relative", relative_gap(inv.y, ref.y)}};
  } catch (const Error& err) {
    report["agreement"] = {{"reference_path", reference}, {"error", std::string(to_string(err.kind()))}};
  }

  if (!opts.out.empty()) {
    RmpData<Scalar> result = data;
    if (opts.tol_rank) result.tol_rank = opts.tol_rank;
    result.inverse = inv;
    result.dense_inverse = dense;
    write_rmp(opts.out, RmpFile{std::move(result)});
    report["out"] = opts.out;
  }
  out << report.dump(2) << "\n";
  return kOk;
}

template <FieldScalar Scalar>
int check(const RmpData<Scalar>& data, const CheckOptions& opts, std::ostream& out) {
  const auto problem = validated(data, opts.tol_rank);
  const bool stored = data.inverse.has_value();
  const StructuredInverse<Scalar> inv = stored ? *data.inverse : structured_inverse_svd(problem);

  const IdentityTolerance tol(opts.tol, opts.tol);
  const IdentityTolerance penrose_tol(0.0, opts.penrose_tol);
  const auto corollary = check_corollary(problem, inv, tol);
  const auto penrose_G = check_penrose(problem.A(), inv.G, penrose_tol);
  const auto penrose_pinv = check_penrose(problem.A(), pseudoinverse(problem.svd()), penrose_tol);
  const auto nullspace = nullspace_difference_check(problem, tol);

  const Mat<Scalar> reassembled = reassemble_inverse(inv, problem.D());
  const double riedel_gap = relative_gap(riedel_inverse(problem), reassembled);
  const bool riedel_pass = riedel_gap <= opts.riedel_tol;

  json corollary_json = json::object();
  for (const auto& c : corollary.checks) corollary_json[c.name] = check_json(c);
  json penrose_json = json::object();
  json pinv_json = json::object();
  for (std::size_t i = 0; i < penrose_G.checks.size(); ++i) {
    penrose_json[penrose_G.checks[i].name] = check_json(penrose_G.checks[i]);
    pinv_json[penrose_pinv.checks[i].name] = check_json(penrose_pinv.checks[i]);
  }

  const bool pass = corollary.all_pass() && penrose_G.reflexive_pass() && penrose_pinv.all_pass() && nullspace.pass &&
                    riedel_pass;
  json report = {
      {"command", "check"},
      {"field", std::string(to_string(field_of<Scalar>))},
      {"n", problem.n()},
      {"k", problem.k()},
      {"inverse_source", stored ? "stored" : "computed"},
      {"tolerance", {{"abs", tol.abs()}, {"rel", tol.rel()}, {"penrose_rel", opts.penrose_tol},
                     {"riedel_rel", opts.riedel_tol}}},
      {"identities", corollary_json},
      {"penrose_G", penrose_json},
      {"penrose_pseudoinverse", pinv_json},
      {"nullspace_difference", check_json(nullspace)},
      {"riedel", {{"relative_gap", riedel_gap}, {"pass", riedel_pass}}},
      {"pass", pass},
  };
  out << report.dump(2) << "\n";
  return pass ? kOk : kIdentityFailure;
}

// |(p1 / p2) exp(l1 - l2) - 1|, i.e. |v1 / v2 - 1| without forming either value.
template <FieldScalar Scalar>
double log_relative_gap(const LogDet<Scalar>& a, const LogDet<Scalar>& b) {
  if (std::abs(b.phase) == 0.0) return std::abs(a.phase) == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return std::abs(a.phase / b.phase * std::exp(a.log_abs - b.log_abs) - Scalar{1});
}

template <FieldScalar Scalar>
json log_det_json(const LogDet<Scalar>& d) {
  return {{"value", scalar_to_json(d.value())}, {"phase", scalar_to_json(d.phase)}, {"log_abs", d.log_abs}};
}

template <FieldScalar Scalar>
int det(const RmpData<Scalar>& data, const DetOptions& opts, std::ostream& out) {
  const auto problem = validated(data, opts.tol_rank);
  const auto inv = structured_inverse_svd(problem);
  const auto lemma = log_det_via_lemma(problem);
  const auto dense = log_determinant(assemble(problem));
  const auto inverse_lemma = log_det_inverse_via_lemma(inv, problem.D());
  LogDet<Scalar> product = lemma;
  product *= inverse_lemma;

  json report = {
      {"command", "det"},
      {"field", std::string(to_string(field_of<Scalar>))},
      {"n", problem.n()},
      {"k", problem.k()},
      {"det_lemma", scalar_to_json(lemma.value())},
      {"det_dense", scalar_to_json(dense.value())},
      {"det_inverse_lemma", scalar_to_json(inverse_lemma.value())},
      {"relative_gap", log_relative_gap(lemma, dense)},
      {"reciprocal_gap", log_relative_gap(product, LogDet<Scalar>{})},
      {"log", {{"det_lemma", log_det_json(lemma)},
               {"det_dense", log_det_json(dense)},
               {"det_inverse_lemma", log_det_json(inverse_lemma)}}},
  };
  out << report.dump(2) << "\n";
  return kOk;
}

int gen(GenOptions opts, std::ostream& out) {
  const auto field = parse_field(opts.field);
  if (!field) throw Error(ErrorKind::InvalidSpec, "--field must be real or complex");
  opts.spec.field = *field;
  const AnyProblem problem = generate_any(opts.spec);
  const RmpFile file = std::visit([](const auto& p) { return RmpFile{rmp_from_problem(p)}; }, problem);
  if (opts.out.empty()) {
    out << dump_rmp(file);
  } else {
    write_rmp(opts.out, file);
  }
  return kOk;
}

void report_error(std::ostream& err, std::string_view kind, const std::string& message,
                  std::optional<long> detected_rank = std::nullopt) {
  json body = {{"error", kind}, {"message", message}};
  if (detected_rank) body["detected_rank"] = *detected_rank;
  err << body.dump() << "\n";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Structured inverses of rank-complementary perturbations A + e D f^*", "rankmod-cli"};
  app.require_subcommand(1);
  std::function<int()> action;

  InvertOptions invert_opts;
  auto* invert_cmd = app.add_subcommand("invert", "Compute G, x, y and the dense inverse");
  invert_cmd->add_option("input", invert_opts.input, "RMP problem file")->required();
  invert_cmd->add_option("--path", invert_opts.path, "Construction to use")
      ->check(CLI::IsMember({"svd", "direct", "general"}));
  invert_cmd->add_option("--out", invert_opts.out, "Write the problem with G, x, y and inverse here");
  invert_cmd->add_option("--tol", invert_opts.tol_rank, "Relative rank threshold");
  invert_cmd->add_option("--seed", invert_opts.seed, "Seed for the random u, v, M of --path general");
  invert_cmd->callback([&] {
    action = [&] {
      return std::visit([&](const auto& data) { return invert(data, invert_opts, out); }, read_rmp(invert_opts.input));
    };
  });

  CheckOptions check_opts;
  auto* check_cmd = app.add_subcommand("check", "Verify identities, Penrose conditions and the pseudoinverse-update form");
  check_cmd->add_option("input", check_opts.input, "RMP problem file")->required();
  check_cmd->add_option("--tol", check_opts.tol, "abs and rel tolerance of the product identities");
  check_cmd->add_option("--penrose-tol", check_opts.penrose_tol, "Relative tolerance of the Penrose conditions");
  check_cmd->add_option("--riedel-tol", check_opts.riedel_tol, "Relative tolerance of the Riedel comparison");
  check_cmd->add_option("--rank-tol", check_opts.tol_rank, "Relative rank threshold");
  check_cmd->callback([&] {
    action = [&] {
      return std::visit([&](const auto& data) { return check(data, check_opts, out); }, read_rmp(check_opts.input));
    };
  });

  DetOptions det_opts;
  auto* det_cmd = app.add_subcommand("det", "Evaluate the singular matrix determinant lemma");
  det_cmd->add_option("input", det_opts.input, "RMP problem file")->required();
  det_cmd->add_option("--tol", det_opts.tol_rank, "Relative rank threshold");
  det_cmd->callback([&] {
    action = [&] {
      return std::visit([&](const auto& data) { return det(data, det_opts, out); }, read_rmp(det_opts.input));
    };
  });

  GenOptions gen_opts;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a seeded valid problem");
  gen_cmd->add_option("--n", gen_opts.spec.n, "Matrix size")->required();
  gen_cmd->add_option("--k", gen_opts.spec.k, "Rank deficiency of A")->required();
  gen_cmd->add_option("--seed", gen_opts.spec.seed, "64-bit seed");
  gen_cmd->add_option("--field", gen_opts.field, "real or complex");
  gen_cmd->add_option("--spread", gen_opts.spec.sigma_spread, "sigma_max / sigma_min of A's nonzero spectrum");
  gen_cmd->add_option("--coupling", gen_opts.spec.coupling, "Share of e, f inside range(A), range(A^*), in [0, 1)");
  gen_cmd->add_option("--dcond", gen_opts.spec.d_cond, "Condition number of D");
  gen_cmd->add_option("--out", gen_opts.out, "Output path (standard output when omitted)");
  gen_cmd->callback([&] { action = [&] { return gen(gen_opts, out); }; });

  BenchOptions bench_opts;
  auto* bench_cmd = app.add_subcommand("bench", "Time the D-swap update against dense LU inversion");
  bench_cmd->add_option("--n", bench_opts.n, "Matrix size");
  bench_cmd->add_option("--k", bench_opts.k, "Rank deficiency of A");
  bench_cmd->add_option("--repeats", bench_opts.repeats, "Samples per timed region");
  bench_cmd->add_option("--seed", bench_opts.seed, "64-bit seed");
  bench_cmd->callback([&] {
    action = [&] {
      out << run_bench(bench_opts).to_json().dump(2) << "\n";
      return static_cast<int>(kOk);
    };
  });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    report_error(err, "ParseError", e.what());
    return kParseError;
  }

  try {
    return action();
  } catch (const Error& e) {
    report_error(err, to_string(e.kind()), e.what(), e.detected_rank());
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    report_error(err, "InternalError", e.what());
    return kNumericalError;
  }
}

}  // namespace rankmod::cli
