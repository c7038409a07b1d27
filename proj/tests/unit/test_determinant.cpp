#include "rankmod/determinant.hpp"
#include "rankmod/instances.hpp"
#include "rankmod/svd_path.hpp"
#include "support/oracle.hpp"

#include <gtest/gtest.h>

using namespace rankmod;
using rankmod::oracle::mat;

TEST(DeterminantLemma, Fixtures) {
  const auto p1 = oracle::fixture1();
  EXPECT_NEAR(det_via_lemma(p1), 2.0, 1e-15);
  EXPECT_NEAR(det_inverse_via_lemma(structured_inverse_svd(p1), p1.D()), 0.5, 1e-15);

  const auto p2 = oracle::fixture2();
  EXPECT_NEAR(det_via_lemma(p2), 2.0, 1e-14);
  EXPECT_NEAR(oracle::elimination_determinant<double>(assemble(p2)), 2.0, 1e-15);
  EXPECT_NEAR(det_inverse_via_lemma(structured_inverse_svd(p2), p2.D()), 0.5, 1e-14);
}

TEST(DeterminantLemma, SingularDGivesZero) {
  const auto p = oracle::fixture2();
  const auto ld = log_det_via_lemma<double>(p.A(), p.e(), mat(1, 1, {0}), p.f());
  EXPECT_EQ(ld.value(), 0.0);
  EXPECT_TRUE(std::isinf(ld.log_abs));
  EXPECT_EQ(oracle::elimination_determinant<double>(p.A() + p.e() * 0.0 * p.f().transpose()), 0.0);
}

TEST(DeterminantLemma, InverseWithSingularDThrows) {
  const auto p = oracle::fixture1();
  const auto inv = structured_inverse_svd(p);
  try {
    det_inverse_via_lemma(inv, mat(1, 1, {0}));
    FAIL() << "expected DSingular";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DSingular);
  }
}

TEST(LogDeterminant, AvoidsOverflow) {
  // det(2 I_2000) = 2^2000 overflows a double.
  const Mat<double> m = 2.0 * Mat<double>::Identity(2000, 2000);
  const auto ld = log_determinant(m);
  EXPECT_DOUBLE_EQ(ld.phase, 1.0);
  EXPECT_NEAR(ld.log_abs, 2000.0 * std::log(2.0), 1e-9);
  EXPECT_TRUE(std::isinf(ld.value()));
}

TEST(LogDeterminant, SignAndComplexPhase) {
  EXPECT_NEAR(determinant<double>(mat(2, 2, {0, 1, 1, 0})), -1.0, 1e-15);
  Mat<Complex> z(2, 2);
  z << Complex(0, 1), 0, 0, Complex(0, 2);
  const auto ld = log_determinant(z);
  EXPECT_NEAR(std::abs(ld.phase - Complex(-1, 0)), 0.0, 1e-15);
  EXPECT_NEAR(ld.log_abs, std::log(2.0), 1e-15);
}

template <typename Scalar>
class DeterminantProperties : public ::testing::Test {};
using Scalars = ::testing::Types<double, Complex>;
TYPED_TEST_SUITE(DeterminantProperties, Scalars);

TYPED_TEST(DeterminantProperties, LemmaMatchesEliminationAndReciprocal) {
  using S = TypeParam;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    GeneratorSpec spec;
    spec.n = 6 + static_cast<Eigen::Index>(seed);
    spec.k = 1 + static_cast<Eigen::Index>(seed % 3);
    spec.seed = 42 + seed;
    spec.field = field_of<S>;
    const auto p = generate<S>(spec);
    const S lemma = det_via_lemma(p);
    const S dense = oracle::elimination_determinant(assemble(p));
    EXPECT_LE(std::abs(lemma - dense), 1e-10 * std::abs(dense)) << "seed " << seed;
    const S inverse = det_inverse_via_lemma(structured_inverse_svd(p), p.D());
    EXPECT_LE(std::abs(inverse * lemma - S{1}), 1e-9) << "seed " << seed;
  }
}
