#include "rankmod/identities.hpp"

#include "rankmod/linalg.hpp"
#include "rankmod/svd_path.hpp"

#include <algorithm>
#include <cmath>

namespace rankmod {

ResidualCheck make_check(std::string name, double residual, double scale, const IdentityTolerance& tol) {
  return ResidualCheck{std::move(name), residual, scale, tol.accepts(residual, scale)};
}

bool IdentityReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const ResidualCheck& c) { return c.pass; });
}

const ResidualCheck& IdentityReport::operator[](std::string_view name) const {
  for (const auto& c : checks) {
    if (c.name == name) return c;
  }
  throw std::out_of_range("IdentityReport: no check named " + std::string(name));
}

bool PenroseReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const ResidualCheck& c) { return c.pass; });
}

template <FieldScalar Scalar>
IdentityReport check_corollary(const RankModifiedProblem<Scalar>& problem, const StructuredInverse<Scalar>& inv,
                               const IdentityTolerance& tol) {
  const Mat<Scalar>& A = problem.A();
  const Mat<Scalar>& e = problem.e();
  const Mat<Scalar>& f = problem.f();
  const Eigen::Index n = problem.n();
  const Eigen::Index k = problem.k();
  if (inv.G.rows() != n || inv.G.cols() != n || inv.x.rows() != n || inv.x.cols() != k || inv.y.rows() != n ||
      inv.y.cols() != k) {
    throw Error(ErrorKind::DimensionMismatch, "check_corollary: inverse does not match the problem's n, k");
  }
  const Mat<Scalar>& G = inv.G;
  const Mat<Scalar>& x = inv.x;
  const Mat<Scalar>& y = inv.y;

  const double nA = A.norm(), ne = e.norm(), nf = f.norm();
  const double nG = G.norm(), nx = x.norm(), ny = y.norm();
  const Mat<Scalar> Ik = Mat<Scalar>::Identity(k, k);
  const Mat<Scalar> In = Mat<Scalar>::Identity(n, n);

  const Mat<Scalar> AG = A * G;
  const Mat<Scalar> GA = G * A;

  IdentityReport report;
  report.tolerance = tol;
  report.checks = {
      make_check("Ax", (A * x).norm(), nA * nx, tol),
      make_check("yA", (y.adjoint() * A).norm(), ny * nA, tol),
      make_check("Ge", (G * e).norm(), nG * ne, tol),
      make_check("fG", (f.adjoint() * G).norm(), nf * nG, tol),
      make_check("fx_minus_I", (f.adjoint() * x - Ik).norm(), nf * nx, tol),
      make_check("ye_minus_I", (y.adjoint() * e - Ik).norm(), ny * ne, tol),
      make_check("AG_plus_eyStar_minus_I", (AG + e * y.adjoint() - In).norm(), nA * nG + ne * ny, tol),
      make_check("GA_plus_xfStar_minus_I", (GA + x * f.adjoint() - In).norm(), nG * nA + nx * nf, tol),
  };
  return report;
}

template <FieldScalar Scalar>
PenroseReport check_penrose(const Mat<Scalar>& A, const Mat<Scalar>& G, const IdentityTolerance& tol) {
  if (A.rows() != A.cols() || G.rows() != G.cols() || A.rows() != G.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "check_penrose: A and G must be square of the same size");
  }
  const double nA = A.norm(), nG = G.norm();
  const Mat<Scalar> AG = A * G;
  const Mat<Scalar> GA = G * A;

  PenroseReport report;
  report.tolerance = tol;
  report.checks = {
      make_check("AGA_minus_A", (AG * A - A).norm(), nA * nG * nA, tol),
      make_check("GAG_minus_G", (GA * G - G).norm(), nG * nA * nG, tol),
      make_check("AG_hermitian", (AG.adjoint() - AG).norm(), nA * nG, tol),
      make_check("GA_hermitian", (GA.adjoint() - GA).norm(), nG * nA, tol),
  };
  return report;
}

template <FieldScalar Scalar>
RiedelDecomposition<Scalar> riedel_decompose(const RankModifiedProblem<Scalar>& problem) {
  const auto& svd = problem.svd();
  const Mat<Scalar>& e = problem.e();
  const Mat<Scalar>& f = problem.f();
  const double tol = problem.tol_rank();

  RiedelDecomposition<Scalar> d;
  d.V1 = svd.U_r * (svd.U_r.adjoint() * e);
  d.W1 = svd.U_k * (svd.U_k.adjoint() * e);
  d.V2 = svd.V_r * (svd.V_r.adjoint() * f);
  d.W2 = svd.V_k * (svd.V_k.adjoint() * f);
  d.C1 = d.W1 * invert_checked<Scalar>(d.W1.adjoint() * d.W1, tol, ErrorKind::PivotSingular, "W1^* W1");
  d.C2 = d.W2 * invert_checked<Scalar>(d.W2.adjoint() * d.W2, tol, ErrorKind::PivotSingular, "W2^* W2");
  return d;
}

template <FieldScalar Scalar>
Mat<Scalar> riedel_inverse(const RankModifiedProblem<Scalar>& problem) {
  const auto d = riedel_decompose(problem);
  const Mat<Scalar> D_inv = invert_checked(problem.D(), problem.tol_rank(), ErrorKind::DSingular, "D");
  const Mat<Scalar> A_pinv = pseudoinverse(problem.svd());

  Mat<Scalar> left = A_pinv - d.C2 * (d.V2.adjoint() * A_pinv);
  Mat<Scalar> out = left - (left * d.V1) * d.C1.adjoint();
  out.noalias() += (d.C2 * D_inv) * d.C1.adjoint();
  return out;
}

template <FieldScalar Scalar>
ResidualCheck nullspace_difference_check(const RankModifiedProblem<Scalar>& problem, const IdentityTolerance& tol) {
  const auto& svd = problem.svd();
  const Mat<Scalar>& e = problem.e();
  const auto d = riedel_decompose(problem);
  const Mat<Scalar> A_pinv = pseudoinverse(svd);
  const Mat<Scalar> Uk_e_inv =
      invert_checked<Scalar>(svd.U_k.adjoint() * e, problem.tol_rank(), ErrorKind::PivotSingular, "U_k^* e");

  const Mat<Scalar> lhs = ((A_pinv * e) * Uk_e_inv) * svd.U_k.adjoint();
  const Mat<Scalar> rhs = (A_pinv * d.V1) * d.C1.adjoint();
  return make_check("nullspace_difference", (lhs - rhs).norm(), A_pinv.norm() * e.norm() * d.C1.norm(), tol);
}

#define RANKMOD_INSTANTIATE_IDENTITIES(S)                                                                   \
  template IdentityReport check_corollary(const RankModifiedProblem<S>&, const StructuredInverse<S>&,      \
                                          const IdentityTolerance&);                                       \
  template PenroseReport check_penrose(const Mat<S>&, const Mat<S>&, const IdentityTolerance&);            \
  template RiedelDecomposition<S> riedel_decompose(const RankModifiedProblem<S>&);                         \
  template Mat<S> riedel_inverse(const RankModifiedProblem<S>&);                                           \
  template ResidualCheck nullspace_difference_check(const RankModifiedProblem<S>&, const IdentityTolerance&);
RANKMOD_INSTANTIATE_IDENTITIES(double)
RANKMOD_INSTANTIATE_IDENTITIES(Complex)

}  // namespace rankmod
