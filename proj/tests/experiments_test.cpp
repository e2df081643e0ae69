#include <gtest/gtest.h>

#include <cmath>

#include "zklab/experiments.hpp"
#include "zklab/spectral.hpp"

using namespace zklab;

TEST(Experiments, UniformTimes) {
  const auto t = uniform_times(1.0, 5);
  ASSERT_EQ(t.size(), 5u);
  EXPECT_DOUBLE_EQ(t[2], 0.5);
  EXPECT_THROW(uniform_times(1.0, 1), ZklabError);
}

TEST(Experiments, SymmetricSamplesLinearMatchesPropagator) {
  const Grid2D g = Grid2D::centered(64, 32.0);
  const RealField u0 = RealField::from_function(g, GaussianDatum{1e-6, 2.0});
  const auto s = symmetric_samples(u0, {0.0, 0.5}, false, 0.01);
  EXPECT_LT(l2_norm(s[1] - linear_propagate(u0, 0.5, DispersionSymbol::symmetric())), 1e-20);
}

TEST(Decay15, DefaultRunWithinCapAndRateExact) {
  const Decay15Report r = run_decay15(Decay15Config{});
  ASSERT_EQ(r.curve.size(), 11u);
  EXPECT_DOUBLE_EQ(r.curve.front().w_adaptive, 1.0);
  EXPECT_LE(r.max_adaptive, 10.0);
  EXPECT_NEAR(r.a_end, 1.0 / std::sqrt(1.0 + 6.75), 1e-15);
  EXPECT_EQ(r.a_end, r.a_end_closed_form);
  EXPECT_LT(r.cap_sensitivity, 1e-3);
}

TEST(Decay15, RejectsBadConfig) {
  Decay15Config c;
  c.n = 15;
  EXPECT_THROW(run_decay15(c), ZklabError);
  c = Decay15Config{};
  c.datum.amplitude = 0.0;
  EXPECT_THROW(run_decay15(c), ZklabError);
}

TEST(Persistence, ZeroBetaGivesZeroExponent) {
  PersistenceConfig c;
  c.beta = 0.0;
  for (const auto& cv : run_persistenceB(c).curves) EXPECT_LT(std::abs(cv.c_hat), 1e-8);
}

TEST(Persistence, SpreadAndMirror) {
  const PersistenceReport r = run_persistenceB(PersistenceConfig{});
  EXPECT_TRUE(r.finite);
  EXPECT_LE(r.spread, 0.2);
  for (const auto& cv : r.curves) EXPECT_LT(cv.mirror_gap, 1e-6);
}

TEST(Persistence, TruncationEngagesForSmallN) {
  // The default datum never reaches x + y = 4, so n = 4, 8, 16 coincide; n = 1 must not.
  PersistenceConfig c;
  c.ns = {1, 16};
  const PersistenceReport r = run_persistenceB(c);
  EXPECT_GT(std::abs(r.curves[0].c_hat - r.curves[1].c_hat), 1e-3);
}

TEST(Annulus, IdenticalDataGiveZeroAndDifferentDataPositive) {
  AnnulusConfig c;
  c.n = 64;
  c.L = 32.0;
  c.dt = 0.02;
  c.snapshot_interval = 0.1;
  c.t_end = 0.4;
  c.radii = {3, 4, 5, 6};
  c.quadrature_n = 256;
  c.refine = false;
  const AnnulusReport diff = run_annulus_trend(c);
  EXPECT_TRUE(diff.all_positive);
  c.second = c.first;
  for (const auto& row : run_annulus_trend(c).rows) EXPECT_EQ(row.norm, 0.0);
}

TEST(Annulus, RegionMembership) {
  EXPECT_TRUE(in_annulus_region(3.0, 2.5, 0.0));
  EXPECT_FALSE(in_annulus_region(3.0, 0.0, 0.0));
  EXPECT_FALSE(in_annulus_region(3.0, 2.5, 2.5));
}
