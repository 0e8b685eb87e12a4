#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "random_states.hpp"
#include "sympcoh/coherence.hpp"
#include "sympcoh/ensembles.hpp"
#include "sympcoh/symplectic_ops.hpp"

namespace sympcoh {
namespace {

constexpr double kPi = std::numbers::pi;
const double kSinh1Sq = 1.3810978455418155;

Matrix rotation(double a) {
  Matrix o(2, 2);
  o << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
  return o;
}

TEST(SymplecticCoherence, Examples) {
  EXPECT_EQ(symplectic_coherence(CovMat::vacuum(3)), 0.0);
  const CovMat msc = msc_canonical(2.0 * std::cosh(1.0), 1).cov();
  EXPECT_NEAR(symplectic_coherence(msc), kSinh1Sq, 1e-13);

  Matrix v = 3.0 * Matrix::Identity(4, 4);
  v(0, 3) = v(3, 0) = 1.0;
  EXPECT_DOUBLE_EQ(symplectic_coherence(CovMat(v)), 1.0);
}

TEST(SymplecticCoherence, FreeStatesHaveZeroAndReportIsConsistent) {
  Rng rng = stream(41, 0);
  for (int t = 0; t < 100; ++t) {
    const int m = 1 + t % 4;
    const CovMat free = testing::random_free_cm(m, rng);
    EXPECT_TRUE(is_free(free));
    EXPECT_EQ(symplectic_coherence(free), 0.0);

    const CovMat cov = testing::random_cm(m, rng);
    const CoherenceReport rep = coherence_report(cov);
    EXPECT_NEAR(rep.hs_distance_sq_to_free, 2.0 * rep.c, 1e-12 * std::max(1.0, rep.c));
    EXPECT_TRUE(is_free(rep.closest_free));
    EXPECT_TRUE(validate(rep.closest_free.matrix()).valid());
    EXPECT_GE(rep.c, 0.0);
  }
}

TEST(SymplecticCoherence, InvariantUnderPassiveOrthogonalGates) {
  Rng rng = stream(42, 0);
  for (int t = 0; t < 100; ++t) {
    const int m = 1 + t % 4;
    const CovMat cov = testing::random_cm(m, rng);
    const CovMat out = apply(block_orthogonal(haar_orthogonal(m, rng)), cov);
    EXPECT_NEAR(symplectic_coherence(out), symplectic_coherence(cov), 1e-10 * std::max(1.0, symplectic_coherence(cov)));
  }
}

TEST(SymplecticCoherence, FreeActiveGateCanIncreaseIt) {
  // [[3I, M], [M^T, 3I]] with M = [[0,0],[1,0]]; A M A^{-1} = [[1,-1],[1,-1]].
  Matrix v = 3.0 * Matrix::Identity(4, 4);
  Matrix mblock = Matrix::Zero(2, 2);
  mblock(1, 0) = 1.0;
  v.topRightCorner(2, 2) = mblock;
  v.bottomLeftCorner(2, 2) = mblock.transpose();
  const CovMat cov(v);
  EXPECT_DOUBLE_EQ(symplectic_coherence(cov), 1.0);

  Matrix a(2, 2);
  a << 1, 1, 0, 1;
  const CovMat out = apply(block_diagonal_active(a), cov);
  Matrix expected(2, 2);
  expected << 1, -1, 1, -1;
  EXPECT_LT((blocks(out).xp - expected).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_NEAR(symplectic_coherence(out), 4.0, 1e-13);
}

TEST(MaxSymplecticCoherence, Examples) {
  EXPECT_DOUBLE_EQ(max_symplectic_coherence(2.0, 1), 0.0);
  EXPECT_DOUBLE_EQ(max_symplectic_coherence(6.0, 1), 8.0);
  EXPECT_DOUBLE_EQ(max_symplectic_coherence(10.0, 2), 15.0);
  EXPECT_NEAR(max_symplectic_coherence(2.0 * std::cosh(1.0), 1), kSinh1Sq, 1e-14);
  EXPECT_THROW(max_symplectic_coherence(3.0, 2), DomainError);
  EXPECT_THROW(max_symplectic_coherence(3.0, 0), DimensionError);
  EXPECT_DOUBLE_EQ(msc_squeezing(2.0, 1), 0.0);
  EXPECT_NEAR(msc_squeezing(2.0 * std::cosh(1.0), 1), 0.5, 1e-15);
}

TEST(MscCanonical, ReachesTheMaximumWithExactEnergy) {
  for (int m = 1; m <= 5; ++m) {
    for (double excess : {0.0, 0.3, 2.0, 8.0, 40.0}) {
      const double E = 2.0 * m + excess;
      const GaussianState s = msc_canonical(E, m);
      EXPECT_NEAR(s.cov().trace(), E, 1e-10 * E);
      EXPECT_TRUE(is_pure(s.cov()));
      const double cmax = max_symplectic_coherence(E, m);
      EXPECT_NEAR(symplectic_coherence(s.cov()), cmax, 1e-10 * std::max(1.0, cmax));
    }
  }
  const CovMat one = msc_canonical(2.0 * std::cosh(1.0), 1).cov();
  EXPECT_NEAR(one(0, 1), -std::sinh(1.0), 1e-14);
}

TEST(MscCanonical, RandomPureStatesNeverExceedTheMaximum) {
  Rng rng = stream(43, 0);
  for (int t = 0; t < 300; ++t) {
    const int m = 1 + t % 4;
    const double E = 2.0 * m + testing::uniform(rng, 0.0, 20.0);
    const EnsembleKind kind = t % 2 ? EnsembleKind::kUnitary : EnsembleKind::kOrthogonal;
    const PureSample s = sample_pure(kind, E, m, rng);
    EXPECT_NEAR(s.cov.trace(), E, 1e-9 * E);
    EXPECT_LE(symplectic_coherence(s.cov), max_symplectic_coherence(E, m) * (1.0 + 1e-12) + 1e-12);
  }
}

TEST(MembershipConditions, Examples) {
  Vector both(2);
  both << kPi / 4, kPi / 4;
  EXPECT_TRUE(msc_membership_conditions(Matrix::Identity(2, 2), both).holds);

  Vector first(2);
  first << kPi / 4, 0.0;
  EXPECT_TRUE(msc_membership_conditions(Matrix::Identity(2, 2), first).holds);
  const MembershipResult rot = msc_membership_conditions(rotation(kPi / 4), first);
  EXPECT_FALSE(rot.holds);
  // (O^T C^2 O)_11 = 0.75
  EXPECT_NEAR(rot.residuals[0][0], 0.5, 1e-14);

  EXPECT_THROW(msc_membership_conditions(2.0 * Matrix::Identity(2, 2), both), DomainError);
  EXPECT_THROW(msc_membership_conditions(Matrix::Identity(2, 2), Vector::Zero(3)), DimensionError);
}

TEST(MembershipConditions, AgreeWithTheConstructedState) {
  Rng rng = stream(44, 0);
  const double E = 9.0;
  for (int t = 0; t < 60; ++t) {
    const int m = 2 + t % 3;
    MscSpec spec = MscSpec::canonical(E, m);
    spec.o2 = haar_orthogonal(m, rng);
    if (t % 3 == 0) {
      spec.o1 = haar_orthogonal(m, rng);
      for (int k = 0; k < m; ++k) spec.theta(k) = testing::uniform(rng, 0.0, kPi);
    } else if (t % 3 == 1) {
      // Every phase at pi/4 and any O1 works.
      spec.o1 = haar_orthogonal(m, rng);
      spec.theta.setConstant(kPi / 4);
    }
    const MembershipResult cond = msc_membership_conditions(spec.o1, spec.theta);
    const double c = symplectic_coherence(msc_state(spec).cov());
    const double cmax = max_symplectic_coherence(E, m);
    if (cond.holds) {
      EXPECT_NEAR(c, cmax, 1e-9 * cmax);
    } else {
      EXPECT_LT(c, cmax * (1.0 - 1e-9));
    }
  }
}

TEST(MixedMscCheck, Examples) {
  const CovMat v = msc_canonical(6.0, 1).cov();
  EXPECT_TRUE(mixed_msc_check(v, v, v).ok);

  const MixedMscResult bad = mixed_msc_check(v, v, CovMat::vacuum(1));
  EXPECT_FALSE(bad.ok);
  EXPECT_GE(bad.reasons.size(), 3u);

  const CovMat thermal(3.0 * Matrix::Identity(2, 2));
  const MixedMscResult mixed = mixed_msc_check(thermal, thermal, thermal);
  EXPECT_FALSE(mixed.ok);
  EXPECT_FALSE(mixed_msc_check(v, v, CovMat::vacuum(2)).ok);
}

TEST(PerturbationBounds, Examples) {
  EXPECT_NEAR(perturbation_bound(1.0, 1.0, 1.0, 0.01), 13.65685424949238, 1e-12);
  EXPECT_EQ(perturbation_bound(3.0, 5.0, 4.0, 0.0), 0.0);
  EXPECT_LT(perturbation_bound(1.0, 1.0, 1.0, 0.01), perturbation_bound(1.0, 4.0, 1.0, 0.01));
  EXPECT_THROW(perturbation_bound(-1.0, 1.0, 1.0, 0.01), DomainError);
  EXPECT_DOUBLE_EQ(trace_distance_cov_bound(6.0, 1, 0.25), 120.0);
  EXPECT_THROW(trace_distance_cov_bound(6.0, 0, 0.25), DimensionError);
}

TEST(NumericMaxSearch, ApproachesTheClosedForm) {
  for (auto [E, m] : {std::pair{6.0, 1}, std::pair{10.0, 2}, std::pair{11.5, 3}}) {
    const MaxSearchResult r = numeric_max_search(E, m, 40, 7);
    EXPECT_DOUBLE_EQ(r.c_max, max_symplectic_coherence(E, m));
    EXPECT_LE(r.best_c, r.c_max * (1.0 + 1e-9));
    EXPECT_GE(r.best_c, r.best_sample_c * (1.0 - 1e-12));
    EXPECT_NEAR(r.best_c, r.c_max, 1e-6 * r.c_max);
    EXPECT_NEAR(r.cov.trace(), E, 1e-8 * E);
    EXPECT_TRUE(is_pure(r.cov));
  }
}

TEST(NumericMaxSearch, IsDeterministicAcrossThreadCounts) {
  const MaxSearchResult a = numeric_max_search(10.0, 2, 16, 99, 1);
  const MaxSearchResult b = numeric_max_search(10.0, 2, 16, 99, 3);
  EXPECT_EQ(a.best_c, b.best_c);
  EXPECT_EQ(a.best_trial, b.best_trial);
}

}  // namespace
}  // namespace sympcoh
