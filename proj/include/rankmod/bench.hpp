#pragma once

#include "rankmod/types.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace rankmod {

struct BenchOptions {
  Eigen::Index n = 200;
  Eigen::Index k = 2;
  int repeats = 5;
  std::uint64_t seed = 0;
};

/// Wall-clock samples (seconds) for one timed region and their median.
struct Timing {
  std::vector<double> samples;
  double median = 0.0;
};

/// Timings of the D-swap workflow against dense refactorization. Every timed
/// region runs alone on the calling thread.
struct BenchReport {
  BenchOptions options;
  std::string problem_digest;  // FNV-1a 64 of the serialized problem

  Timing construct_svd;     // rank-split SVD + (G, x, y)
  Timing construct_direct;  // SVD-free (G, x, y)
  Timing reassemble;        // G + x D^{-1} y^* for a fresh D
  Timing dense_lu;          // assemble + LU inverse for the same fresh D
  Timing woodbury_update;   // Woodbury update of a shifted, invertible A for a fresh D

  double speedup = 0.0;  // dense_lu.median / reassemble.median

  // Scaled residuals ||Ainv_tilde * X - I||_F / (||Ainv_tilde|| ||X||) from the last repeat.
  double reassemble_residual = 0.0;
  double dense_lu_residual = 0.0;
  double woodbury_residual = 0.0;

  nlohmann::json to_json() const;
};

/// Errors: InvalidSpec (n > k >= 1 and repeats >= 1 required).
BenchReport run_bench(const BenchOptions& options);

/// Stable 64-bit FNV-1a digest, rendered as 16 hex digits.
std::string fnv1a_hex(std::string_view bytes);

}  // namespace rankmod
