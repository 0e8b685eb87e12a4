#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "random_states.hpp"
#include "sympcoh/coherence.hpp"
#include "sympcoh/gaussian_core.hpp"
#include "sympcoh/symplectic_ops.hpp"

namespace sympcoh {
namespace {

Matrix mat2(double a, double b, double c, double d) {
  Matrix v(2, 2);
  v << a, b, c, d;
  return v;
}

TEST(SymplecticForm, AntisymmetricAndSquaresToMinusIdentity) {
  for (int m : {1, 2, 5}) {
    const Matrix omega = symplectic_form(m);
    EXPECT_EQ(omega + omega.transpose(), Matrix::Zero(2 * m, 2 * m));
    EXPECT_EQ(omega * omega, -Matrix::Identity(2 * m, 2 * m));
  }
  EXPECT_THROW(symplectic_form(0), DimensionError);
}

TEST(Validate, VacuumAndSqueezedVacuumAreValid) {
  for (int m : {1, 3}) EXPECT_TRUE(validate(Matrix::Identity(2 * m, 2 * m)).valid());
  EXPECT_TRUE(validate(mat2(std::exp(1.0), 0, 0, std::exp(-1.0))).valid());
}

TEST(Validate, SubVacuumDiagonalViolatesUncertainty) {
  const ValidityReport report = validate(mat2(0.5, 0, 0, 0.5));
  ASSERT_FALSE(report.valid());
  ASSERT_TRUE(report.violates(Invariant::kUncertainty));
  for (const auto& v : report.violations) {
    // min eig of [[0.5, i], [-i, 0.5]] is -0.5
    if (v.invariant == Invariant::kUncertainty) EXPECT_NEAR(v.magnitude, 0.5, 1e-14);
  }
  EXPECT_TRUE(report.violates(Invariant::kMinimumTrace));
  EXPECT_FALSE(report.violates(Invariant::kPositiveDefinite));
  EXPECT_NE(report.describe().find("uncertainty"), std::string::npos);
}

TEST(Validate, ReportsEachInvariant) {
  EXPECT_TRUE(validate(mat2(1, 0.1, 0, 1)).violates(Invariant::kSymmetry));
  EXPECT_TRUE(validate(mat2(-1, 0, 0, -1)).violates(Invariant::kPositiveDefinite));
  EXPECT_TRUE(validate(mat2(-1, 0, 0, 3)).violates(Invariant::kPositionBlock));
  EXPECT_TRUE(validate(mat2(3, 0, 0, -1)).violates(Invariant::kMomentumBlock));
  EXPECT_TRUE(validate(mat2(std::numeric_limits<double>::quiet_NaN(), 0, 0, 1)).violates(Invariant::kNonFinite));
}

TEST(Validate, ToleranceIsRespected) {
  const Matrix almost = mat2(1.0 - 1e-11, 0, 0, 1.0);
  EXPECT_TRUE(validate(almost, 1e-9).valid());
  EXPECT_FALSE(validate(almost, 0.0).valid());
}

TEST(Validate, RejectsBadShapes) {
  EXPECT_THROW(validate(Matrix::Identity(3, 3)), DimensionError);
  EXPECT_THROW(validate(Matrix::Identity(2, 4)), DimensionError);
  EXPECT_THROW(validate(Matrix(0, 0)), DimensionError);
}

TEST(CovMat, ConstructorThrowsWithReport) {
  try {
    CovMat bad(mat2(0.5, 0, 0, 0.5));
    FAIL() << "expected InvalidCovariance";
  } catch (const InvalidCovariance& e) {
    EXPECT_TRUE(e.report().violates(Invariant::kUncertainty));
  }
  EXPECT_THROW(CovMat(Matrix::Identity(2, 2), -1.0), DomainError);
}

TEST(Blocks, Examples) {
  const Blocks b = blocks(CovMat::vacuum(2));
  EXPECT_EQ(b.x, Matrix::Identity(2, 2));
  EXPECT_EQ(b.p, Matrix::Identity(2, 2));
  EXPECT_EQ(b.xp, Matrix::Zero(2, 2));

  const double ch = std::cosh(1.0), sh = std::sinh(1.0);
  EXPECT_NEAR(blocks(CovMat(mat2(ch, -sh, -sh, ch))).xp(0, 0), -1.1752011936438014, 1e-15);

  Matrix v = 3.0 * Matrix::Identity(4, 4);
  Matrix off = Matrix::Zero(2, 2);
  off(0, 1) = 1.0;
  v.topRightCorner(2, 2) = off;
  v.bottomLeftCorner(2, 2) = off.transpose();
  EXPECT_EQ(blocks(CovMat(v)).xp, off);
}

TEST(Blocks, AssembleRoundTripIsBitExact) {
  Rng rng = stream(11, 0);
  for (int t = 0; t < 50; ++t) {
    const CovMat cov = testing::random_cm(1 + t % 4, rng);
    EXPECT_EQ(assemble(blocks(cov)), cov.matrix());
  }
}

TEST(MeanEnergy, Examples) {
  EXPECT_DOUBLE_EQ(mean_energy(GaussianState::vacuum(1)), 0.5);
  const GaussianState sq(CovMat(mat2(std::exp(1.0), 0, 0, std::exp(-1.0))));
  EXPECT_NEAR(mean_energy(sq), 0.7715403174076219, 1e-15);
  Vector d(2);
  d << 2.0, 0.0;
  EXPECT_DOUBLE_EQ(mean_energy(GaussianState(CovMat::vacuum(1), d)), 1.5);
}

TEST(MeanEnergy, AtLeastHalfPerMode) {
  Rng rng = stream(12, 0);
  for (int t = 0; t < 100; ++t) {
    const int m = 1 + t % 4;
    const GaussianState s(testing::random_cm(m, rng), testing::random_vector(2 * m, rng));
    EXPECT_GE(mean_energy(s), 0.5 * m - 1e-12);
    EXPECT_GE(s.cov().trace(), 2.0 * m - 1e-9);
  }
}

TEST(GaussianState, RejectsBadMeans) {
  EXPECT_THROW(GaussianState(CovMat::vacuum(1), Vector::Zero(3)), DimensionError);
  Vector d(2);
  d << std::numeric_limits<double>::infinity(), 0.0;
  EXPECT_THROW(GaussianState(CovMat::vacuum(1), d), DomainError);
}

TEST(SymplecticEigenvalues, Examples) {
  for (double nu : symplectic_eigenvalues(CovMat::vacuum(3))) EXPECT_NEAR(nu, 1.0, 1e-12);
  const auto thermal = symplectic_eigenvalues(CovMat(3.0 * Matrix::Identity(2, 2)));
  ASSERT_EQ(thermal.size(), 1u);
  EXPECT_NEAR(thermal[0], 3.0, 1e-12);
  EXPECT_NEAR(symplectic_eigenvalues(CovMat(mat2(std::exp(1.0), 0, 0, std::exp(-1.0))))[0], 1.0, 1e-12);
}

TEST(SymplecticEigenvalues, MatchIndependentOracleAndAreSorted) {
  Rng rng = stream(13, 0);
  for (int t = 0; t < 100; ++t) {
    const CovMat cov = testing::random_cm(1 + t % 4, rng);
    const auto nu = symplectic_eigenvalues(cov);
    const auto oracle = testing::symplectic_eigenvalues_oracle(cov);
    ASSERT_EQ(nu.size(), oracle.size());
    for (std::size_t i = 0; i < nu.size(); ++i) {
      EXPECT_NEAR(nu[i], oracle[i], 1e-8 * std::max(1.0, nu[i]));
      EXPECT_GE(nu[i], 1.0 - 1e-9);
      if (i > 0) EXPECT_GE(nu[i - 1], nu[i]);
    }
  }
}

TEST(SymplecticEigenvalues, InvariantUnderSymplecticConjugation) {
  Rng rng = stream(14, 0);
  for (int t = 0; t < 100; ++t) {
    const int m = 1 + t % 4;
    const CovMat cov = testing::random_cm(m, rng, 0.5);
    const SympGate gate(testing::random_symplectic(m, rng, 0.5));
    const auto before = symplectic_eigenvalues(cov);
    const auto after = symplectic_eigenvalues(apply(gate, cov));
    for (std::size_t i = 0; i < before.size(); ++i) EXPECT_NEAR(before[i], after[i], 1e-9);
  }
}

TEST(IsPure, Examples) {
  EXPECT_TRUE(is_pure(CovMat::vacuum(2)));
  EXPECT_FALSE(is_pure(CovMat(3.0 * Matrix::Identity(2, 2))));
  Rng rng = stream(15, 0);
  for (int t = 0; t < 20; ++t) {
    const int m = 1 + t % 3;
    const CovMat pure = pure_gaussian_cm(block_orthogonal(haar_orthogonal(m, rng)), testing::random_vector(m, rng));
    EXPECT_TRUE(is_pure(pure, 1e-8));
  }
}

TEST(ReducedFirstMode, Examples) {
  const ReducedMode vac = reduced_first_mode(CovMat::vacuum(2));
  EXPECT_DOUBLE_EQ(vac.nu_sq, 1.0);
  EXPECT_DOUBLE_EQ(vac.energy, 2.0);

  const GaussianState msc = msc_canonical(2.0 * std::cosh(1.0), 1);
  const ReducedMode red = reduced_first_mode(msc.cov());
  EXPECT_NEAR(red.nu_sq, 1.0, 1e-12);
  EXPECT_NEAR(red.energy, 2.0 * std::cosh(1.0), 1e-12);

  const double r = 0.3;
  const CovMat prod = apply(squeezer(2, 1, r), CovMat::vacuum(2));
  const ReducedMode pr = reduced_first_mode(prod);
  EXPECT_NEAR(pr.nu_sq, 1.0, 1e-12);
  EXPECT_NEAR(pr.energy, 2.0 * std::cosh(2.0 * r), 1e-12);
  EXPECT_EQ(pr.cov.rows(), 2);
}

}  // namespace
}  // namespace sympcoh
