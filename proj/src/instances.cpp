#include "rankmod/instances.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace rankmod {

double Rng::uniform() {
  // (bits + 1) / 2^53 lies in (0, 1].
  const std::uint64_t bits = engine_() >> 11;
  return (static_cast<double>(bits) + 1.0) * 0x1.0p-53;
}

double Rng::normal() {
  if (spare_) {
    const double out = *spare_;
    spare_.reset();
    return out;
  }
  const double radius = std::sqrt(-2.0 * std::log(uniform()));
  const double angle = 2.0 * std::numbers::pi * uniform();
  spare_ = radius * std::sin(angle);
  return radius * std::cos(angle);
}

template <FieldScalar Scalar>
Mat<Scalar> Rng::gaussian(Eigen::Index rows, Eigen::Index cols) {
  Mat<Scalar> out(rows, cols);
  // Column-major fill order is part of the reproducibility contract.
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) out(i, j) = gaussian_scalar<Scalar>();
  }
  return out;
}

template <FieldScalar Scalar>
Mat<Scalar> Rng::haar_unitary(Eigen::Index n) {
  const Mat<Scalar> g = gaussian<Scalar>(n, n);
  Eigen::HouseholderQR<Mat<Scalar>> qr(g);
  Mat<Scalar> q = qr.householderQ() * Mat<Scalar>::Identity(n, n);
  const auto& r = qr.matrixQR();
  for (Eigen::Index j = 0; j < n; ++j) {
    const Scalar d = r(j, j);
    const double mag = std::abs(d);
    if (mag > 0.0) q.col(j) *= d / mag;
  }
  return q;
}

void GeneratorSpec::check() const {
  if (!(n > k && k >= 1)) {
    throw Error(ErrorKind::InvalidSpec,
                "generator: n > k >= 1 required (n=" + std::to_string(n) + ", k=" + std::to_string(k) + ")");
  }
  if (!(sigma_spread >= 1.0) || !std::isfinite(sigma_spread)) {
    throw Error(ErrorKind::InvalidSpec, "generator: sigma_spread must be finite and >= 1");
  }
  if (!(coupling >= 0.0 && coupling < 1.0)) {
    throw Error(ErrorKind::InvalidSpec, "generator: coupling must lie in [0, 1)");
  }
  if (!(d_cond >= 1.0) || !std::isfinite(d_cond)) {
    throw Error(ErrorKind::InvalidSpec, "generator: d_cond must be finite and >= 1");
  }
}

namespace {

// Log-spaced values from 1 down to 1 / ratio, endpoints included.
Eigen::VectorXd log_spaced(Eigen::Index count, double ratio) {
  Eigen::VectorXd out(count);
  for (Eigen::Index i = 0; i < count; ++i) {
    const double t = count > 1 ? static_cast<double>(i) / static_cast<double>(count - 1) : 0.0;
    out(i) = std::exp(-t * std::log(ratio));
  }
  return out;
}

}  // namespace

template <FieldScalar Scalar>
RankModifiedProblem<Scalar> generate(const GeneratorSpec& spec) {
  spec.check();
  if (spec.field != field_of<Scalar>) {
    throw Error(ErrorKind::InvalidSpec, "generator: spec field does not match the requested scalar type");
  }
  const Eigen::Index n = spec.n;
  const Eigen::Index k = spec.k;
  const Eigen::Index r = n - k;
  Rng rng(spec.seed);

  const Mat<Scalar> U = rng.haar_unitary<Scalar>(n);
  const Mat<Scalar> V = rng.haar_unitary<Scalar>(n);

  // sigma_1 = 1, sigma_r = 1 / spread, interior log-uniform.
  Eigen::VectorXd sigma(r);
  const double log_spread = std::log(spec.sigma_spread);
  for (Eigen::Index i = 0; i < r; ++i) {
    if (i == 0) {
      sigma(i) = 1.0;
    } else if (i == r - 1) {
      sigma(i) = 1.0 / spec.sigma_spread;
    } else {
      sigma(i) = std::exp(-rng.uniform() * log_spread);
    }
  }
  std::sort(sigma.data(), sigma.data() + r, std::greater<>());

  const auto U_r = U.leftCols(r);
  const auto U_k = U.rightCols(k);
  const auto V_r = V.leftCols(r);
  const auto V_k = V.rightCols(k);

  Mat<Scalar> A = U_r * sigma.cast<Scalar>().asDiagonal() * V_r.adjoint();

  const double inside = spec.coupling;
  const double outside = std::sqrt(1.0 - spec.coupling * spec.coupling);
  const double col_scale = 1.0 / std::sqrt(static_cast<double>(r));
  const Mat<Scalar> Re = rng.gaussian<Scalar>(r, k) * col_scale;
  const Mat<Scalar> Qe = rng.haar_unitary<Scalar>(k);
  const Mat<Scalar> Rf = rng.gaussian<Scalar>(r, k) * col_scale;
  const Mat<Scalar> Qf = rng.haar_unitary<Scalar>(k);
  Mat<Scalar> e = inside * (U_r * Re) + outside * (U_k * Qe);
  Mat<Scalar> f = inside * (V_r * Rf) + outside * (V_k * Qf);

  const Mat<Scalar> Q1 = rng.haar_unitary<Scalar>(k);
  const Mat<Scalar> Q2 = rng.haar_unitary<Scalar>(k);
  const Eigen::VectorXd d = log_spaced(k, spec.d_cond);
  Mat<Scalar> D = Q1 * d.cast<Scalar>().asDiagonal() * Q2.adjoint();

  return validate(std::move(A), std::move(e), std::move(D), std::move(f));
}

AnyProblem generate_any(const GeneratorSpec& spec) {
  if (spec.field == Field::real) return generate<double>(spec);
  return generate<Complex>(spec);
}

template <FieldScalar Scalar>
Mat<Scalar> dense_inverse_oracle(const RankModifiedProblem<Scalar>& problem) {
  Eigen::PartialPivLU<Mat<Scalar>> lu(assemble(problem));
  if (!(lu.rcond() > kEps)) {
    throw Error(ErrorKind::OracleSingular, "dense_inverse_oracle: assembled matrix is numerically singular");
  }
  return lu.inverse();
}

template <FieldScalar Scalar>
AnsatzParams<Scalar> random_ansatz(const RankModifiedProblem<Scalar>& problem, std::uint64_t seed, double mix) {
  const Eigen::Index n = problem.n();
  const Eigen::Index k = problem.k();
  Rng rng(seed);
  auto perturbed = [&](const Mat<Scalar>& base) {
    const Mat<Scalar> g = rng.gaussian<Scalar>(n, k);
    return Mat<Scalar>(base + (mix * base.norm() / g.norm()) * g);
  };
  Mat<Scalar> u = perturbed(problem.e());
  Mat<Scalar> v = perturbed(problem.f());
  const Mat<Scalar> Q1 = rng.haar_unitary<Scalar>(k);
  const Mat<Scalar> Q2 = rng.haar_unitary<Scalar>(k);
  Mat<Scalar> M = Q1 * log_spaced(k, 10.0).cast<Scalar>().asDiagonal() * Q2.adjoint();
  return AnsatzParams<Scalar>::create(problem, std::move(u), std::move(v), std::move(M));
}

#define RANKMOD_INSTANTIATE_INSTANCES(S)                                   \
  template Mat<S> Rng::gaussian<S>(Eigen::Index, Eigen::Index);            \
  template Mat<S> Rng::haar_unitary<S>(Eigen::Index);                      \
  template RankModifiedProblem<S> generate<S>(const GeneratorSpec&);       \
  template Mat<S> dense_inverse_oracle(const RankModifiedProblem<S>&);    \
  template AnsatzParams<S> random_ansatz(const RankModifiedProblem<S>&, std::uint64_t, double);
RANKMOD_INSTANTIATE_INSTANCES(double)
RANKMOD_INSTANTIATE_INSTANCES(Complex)

}  // namespace rankmod
