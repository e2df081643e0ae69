#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "zklab/spectral.hpp"
#include "zklab/weights.hpp"

using namespace zklab;

TEST(DecayRate, ClosedFormValues) {
  EXPECT_DOUBLE_EQ(decay_rate(0.0, 2.0), 2.0);
  // a0 / sqrt(1 + 6.75 a0^2) at t = 1/2, a0 = 1, from mpmath
  EXPECT_NEAR(decay_rate(0.5, 1.0), 0.359210604053549801427, 1e-16);
  EXPECT_NEAR(decay_rate(2.0 / 27.0, 1.0), 1.0 / std::numbers::sqrt2, 1e-16);
}

TEST(DecayRate, SolvesOdeProperty) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> ut(0.01, 3.0), ua(0.2, 3.0);
  for (int i = 0; i < 100; ++i) {
    const double t = ut(rng), a0 = ua(rng), h = 1e-6;
    const double fd = (decay_rate(t + h, a0) - decay_rate(t - h, a0)) / (2 * h);
    const double a = decay_rate(t, a0);
    EXPECT_NEAR(fd, -6.75 * a * a * a, 1e-7 * a * a * a);
  }
}

TEST(Theta, AnchorValues) {
  const ThetaValues z0 = theta_poly(0.0), z1 = theta_poly(1.0);
  EXPECT_DOUBLE_EQ(z0.value, 0.25);
  EXPECT_DOUBLE_EQ(z0.d1, 0.0);
  EXPECT_DOUBLE_EQ(z0.d2, 0.0);
  EXPECT_NEAR(z1.value, 1.0, 1e-15);
  EXPECT_NEAR(z1.d1, 1.5, 1e-15);
  EXPECT_NEAR(z1.d2, 0.75, 1e-15);
}

TEST(Theta, FactoredSecondDerivativeAndConvexity) {
  for (int k = 0; k <= 200; ++k) {
    const double z = k / 200.0;
    EXPECT_NEAR(theta_poly(z).d2, theta_second_factored(z), 1e-13);
    EXPECT_GE(theta_second_factored(z), 0.0);
  }
  // 45/4 - 36 z + 45/2 z^2
  EXPECT_NEAR(theta_third(0.4), 0.45, 1e-13);
  EXPECT_NEAR(theta_third(1.0), -2.25, 1e-13);
}

TEST(TruncatedWeight, TaylorPieceMatchesAtSeam) {
  for (int n : {4, 8}) {
    const double a = decay_rate(0.3, 1.0);
    const TaylorValues p = p2_taylor(n, 0.3, n, 1.0);
    const double e = std::exp(a * std::pow(n, 1.5));
    EXPECT_NEAR(p.value / e, 1.0, 1e-12);
    EXPECT_NEAR(p.d1 / e, 1.5 * a * std::sqrt(n), 1e-12);
    EXPECT_NEAR(p.d2 / e, 2.25 * a * a * n + 0.75 * a / std::sqrt(n), 1e-12);
  }
}

TEST(Dominance, ConstantMatchesReference) {
  // max over [0, 1] of exp(theta(z) - z^{3/2}) is attained at z = 0: exp(1/4).
  const DominanceReport r = weight_dominance({4, 8, 16}, 1.0, {0.0, 0.25, 0.5, 1.0});
  EXPECT_NEAR(r.closed_form, 1.28402541668774148407, 1e-14);
  EXPECT_LE(r.constant, r.closed_form * (1 + 1e-12));
  EXPECT_GE(r.worst_monotonicity, 0.0);
  EXPECT_LT(r.worst_seam_gap, 1e-10);
}

TEST(KatoWeight, CutoffAndPrimitive) {
  EXPECT_DOUBLE_EQ(kato_cutoff(0.5), 1.0);
  EXPECT_DOUBLE_EQ(kato_cutoff(10.0), 0.0);
  double prev = 1.0;
  for (int k = 0; k <= 100; ++k) {
    const double c = kato_cutoff(1.0 + 0.09 * k);
    EXPECT_LE(c, prev);
    prev = c;
  }
  EXPECT_NEAR(kato_theta(3.0, 4), 3.0, 1e-14);
  EXPECT_NEAR(kato_theta(50.0, 4), kato_theta(41.0, 4), 1e-12);
}

TEST(Weights, KindsAndValidation) {
  EXPECT_NEAR(eval_weight(WeightSpec::exp_abs(2.0), 1.0, 3.0), std::exp(2.0 * 8.0), 1e-9);
  // weights multiply f^2, so the polynomial weight (1 + |x + y|)^a enters squared
  EXPECT_NEAR(eval_weight(WeightSpec::poly(2.0), -1.0, -1.5), std::pow(3.5, 4.0), 1e-12);
  EXPECT_NEAR(log_weight(WeightSpec::exp_linear(0.5), 1.0, 2.0), 3.0, 1e-15);
  EXPECT_STREQ(weight_kind_name(WeightKind::KatoPhiN), weight_kind_name(WeightSpec::kato(4, 1.0).kind));
  EXPECT_THROW(WeightSpec::truncated(0, 1.0).validate(), ZklabError);
}

TEST(Weights, WeightedNormClosedForm) {
  const Grid2D g = Grid2D::centered(256, 16.0);
  const RealField f = RealField::from_function(g, [](double x, double y) { return std::exp(-x * x - y * y); });
  // int e^{-2 r^2} e^{2(x + y)} = (pi/2) e
  EXPECT_NEAR(weighted_norm(f, WeightSpec::exp_linear(1.0)), 0.5 * std::numbers::pi * std::exp(1.0), 1e-10);
  EXPECT_NEAR(weighted_norm(f, WeightSpec::poly(0.0)), 0.5 * std::numbers::pi, 1e-12);
}

TEST(Weights, WindowCutsTail) {
  const Grid2D g = Grid2D::centered(64, 32.0);
  const WeightWindow w{0.05, 0.05, 6.0, 2.0};
  EXPECT_DOUBLE_EQ(window_value(w, g, 0.0, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(window_value(w, g, 4.0, 3.0), 0.0);
  EXPECT_DOUBLE_EQ(window_value(w, g, -15.9, 0.0), 0.0);
  EXPECT_TRUE(w.active());
  EXPECT_FALSE(WeightWindow::none().active());
}

TEST(Weights, OverflowNamesCorner) {
  const Grid2D g = Grid2D::centered(32, 4000.0);
  const RealField f = RealField::from_function(g, [](double, double) { return 1.0; });
  EXPECT_THROW(weighted_norm(f, WeightSpec::exp_abs(10.0)), ZklabError);
}

TEST(Weights, BesselPotentialOnSingleMode) {
  const Grid2D g = Grid2D::centered(32, 2.0 * std::numbers::pi);
  const RealField f = RealField::from_function(g, [](double x, double y) { return std::sin(3 * x + 4 * y); });
  EXPECT_LT(l2_norm(apply_Js(f, 2.0) - 26.0 * f), 1e-11);
  EXPECT_LT(l2_norm(apply_Js(apply_Js(f, 1.3), 0.7) - 26.0 * f), 1e-11);
  EXPECT_THROW(apply_Js(f, -1.0), ZklabError);
}
