#include "rankmod/bench.hpp"

#include "rankmod/compact_svd.hpp"
#include "rankmod/direct_path.hpp"
#include "rankmod/instances.hpp"
#include "rankmod/rmp_file.hpp"
#include "rankmod/svd_path.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>

namespace rankmod {

namespace {

using Clock = std::chrono::steady_clock;
using MatD = Mat<double>;

template <typename Fn>
double time_once(Fn&& fn) {
  const auto start = Clock::now();
  fn();
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void finalize(Timing& t) {
  std::vector<double> sorted = t.samples;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t m = sorted.size();
  t.median = m == 0 ? 0.0 : (m % 2 == 1 ? sorted[m / 2] : 0.5 * (sorted[m / 2 - 1] + sorted[m / 2]));
}

double scaled_residual(const MatD& M, const MatD& X) {
  const MatD I = MatD::Identity(M.rows(), M.cols());
  return (M * X - I).norm() / (M.norm() * X.norm());
}

nlohmann::json timing_json(const Timing& t) { return {{"median_s", t.median}, {"samples_s", t.samples}}; }

}  // namespace

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (const unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

BenchReport run_bench(const BenchOptions& options) {
  if (options.repeats < 1) throw Error(ErrorKind::InvalidSpec, "bench: repeats must be >= 1");
  GeneratorSpec spec;
  spec.n = options.n;
  spec.k = options.k;
  spec.seed = options.seed;
  spec.field = Field::real;
  spec.sigma_spread = 10.0;
  spec.coupling = 0.5;
  spec.d_cond = 10.0;
  const auto problem = generate<double>(spec);

  BenchReport report;
  report.options = options;
  report.problem_digest = fnv1a_hex(dump_rmp(RmpFile{rmp_from_problem(problem)}));

  const MatD& A = problem.A();
  const MatD& e = problem.e();
  const MatD& f = problem.f();
  const Eigen::Index n = problem.n();
  const Eigen::Index k = problem.k();

  // Fresh cores: unitary times a positive scale, so always invertible.
  Rng rng(options.seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<MatD> cores;
  for (int i = 0; i < options.repeats; ++i) cores.push_back(rng.haar_unitary<double>(k) * (0.5 + rng.uniform()));

  // Woodbury baseline on A + s I with s > ||A||_2, which is invertible.
  const double shift = 1.0 + A.norm();
  const MatD A_shift = A + shift * MatD::Identity(n, n);
  const MatD A_shift_inv = Eigen::PartialPivLU<MatD>(A_shift).inverse();
  const MatD Ainv_e = A_shift_inv * e;
  const MatD f_Ainv = f.transpose() * A_shift_inv;
  const MatD f_Ainv_e = f_Ainv * e;

  StructuredInverse<double> inv;
  MatD reassembled, dense, woodbury;
  for (int i = 0; i < options.repeats; ++i) {
    const MatD& D = cores[static_cast<std::size_t>(i)];
    report.construct_svd.samples.push_back(time_once([&] {
      const auto svd = compact_svd(A, problem.tol_rank());
      inv = structured_inverse_svd(svd, e, f, problem.tol_rank());
    }));
    report.construct_direct.samples.push_back(time_once([&] { (void)structured_inverse_direct(problem); }));
    report.reassemble.samples.push_back(time_once([&] { reassembled = reassemble_inverse(inv, D); }));
    report.dense_lu.samples.push_back(
        time_once([&] { dense = Eigen::PartialPivLU<MatD>(assemble(A, e, D, f)).inverse(); }));
    report.woodbury_update.samples.push_back(time_once([&] {
      const MatD capacitance = D.inverse() + f_Ainv_e;
      woodbury = A_shift_inv - Ainv_e * Eigen::PartialPivLU<MatD>(capacitance).solve(f_Ainv);
    }));
  }
  for (Timing* t : {&report.construct_svd, &report.construct_direct, &report.reassemble, &report.dense_lu,
                    &report.woodbury_update}) {
    finalize(*t);
  }
  report.speedup = report.reassemble.median > 0.0 ? report.dense_lu.median / report.reassemble.median : 0.0;

  const MatD& D_last = cores.back();
  const MatD tilde = assemble(A, e, D_last, f);
  report.reassemble_residual = scaled_residual(tilde, reassembled);
  report.dense_lu_residual = scaled_residual(tilde, dense);
  report.woodbury_residual = scaled_residual(assemble(A_shift, e, D_last, f), woodbury);
  return report;
}

nlohmann::json BenchReport::to_json() const {
  return {
      {"command", "bench"},
      {"n", options.n},
      {"k", options.k},
      {"repeats", options.repeats},
      {"seed", options.seed},
      {"problem_digest", problem_digest},
      {"construct_svd", timing_json(construct_svd)},
      {"construct_direct", timing_json(construct_direct)},
      {"reassemble_inverse", timing_json(reassemble)},
      {"dense_lu_inverse", timing_json(dense_lu)},
      {"woodbury_shifted_update", timing_json(woodbury_update)},
      {"speedup_dense_over_reassemble", speedup},
      {"residuals",
       {{"reassemble_inverse", reassemble_residual},
        {"dense_lu_inverse", dense_lu_residual},
        {"woodbury_shifted_update", woodbury_residual}}},
  };
}

}  // namespace rankmod
