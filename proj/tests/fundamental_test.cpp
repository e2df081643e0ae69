#include <gtest/gtest.h>

#include <cmath>

#include "zklab/evolution.hpp"
#include "zklab/fundamental.hpp"
#include "zklab/spectral.hpp"

using namespace zklab;

namespace {

struct Reference {
  double x, y, s;
};

// S(x, y) = 3^{-1/3}/pi * int_0^inf Ai(3^{-1/3}(x + eta^2)) cos(eta y) d eta,
// evaluated with mpmath at 30 digits.
constexpr Reference kReference[] = {
    {-2.0, 0.0, 0.18577703766057047},  {0.0, 0.0, 0.083303222633247996},  {2.0, 1.0, 0.012872424047955022},
    {1.0, 3.0, 0.002369242454178534},  {-1.0, -2.0, 0.02104952756314556}, {3.0, 0.0, 0.005622266317231021},
    {5.0, 0.0, 0.00045601435430231988}, {6.0, 0.0, 0.00010876806261978587},
};

}  // namespace

TEST(FundamentalSolution, ReducedEvaluatorMatchesReference) {
  const SEvalConfig cfg;
  for (const auto& r : kReference) {
    const SReduced v = evaluate_S_reduced(r.x, r.y, cfg);
    EXPECT_TRUE(v.converged);
    EXPECT_NEAR(v.value, r.s, cfg.tol) << r.x << "," << r.y;
    EXPECT_LT(std::abs(v.imag), cfg.tol);
  }
}

TEST(FundamentalSolution, AiryReductionMatchesReference) {
  for (const auto& r : kReference) EXPECT_NEAR(evaluate_S_airy(r.x, r.y), r.s, 1e-8) << r.x << "," << r.y;
}

TEST(FundamentalSolution, DirectQuadratureMatchesReference) {
  const SEvalConfig cfg;
  const SPoint p = evaluate_S_direct(2.0, 1.0, cfg);
  EXPECT_TRUE(p.converged);
  EXPECT_NEAR(p.value.real(), 0.012872424047955022, 10 * cfg.tol);
  EXPECT_LT(std::abs(p.value.imag()), cfg.tol);
}

TEST(FundamentalSolution, EvenInY) {
  const SEvalConfig cfg;
  for (double x : {-3.0, 0.5, 4.0})
    for (double y : {0.3, 1.7, 5.0})
      EXPECT_NEAR(evaluate_S_reduced(x, y, cfg).value, evaluate_S_reduced(x, -y, cfg).value, cfg.tol);
}

TEST(FundamentalSolution, ConfigValidation) {
  SEvalConfig cfg;
  cfg.taper_width = 20.0;
  EXPECT_THROW(cfg.validate(), ZklabError);
  cfg = SEvalConfig{};
  cfg.tol = 0.0;
  EXPECT_THROW(cfg.validate(), ZklabError);
  EXPECT_GT(SEvalConfig{}.refined().n_quad, SEvalConfig{}.n_quad);
}

TEST(FundamentalSolution, TaperIsOneInsideAndZeroOutside) {
  EXPECT_DOUBLE_EQ(raised_cosine_taper(3.0, 12.0, 4.0), 1.0);
  EXPECT_DOUBLE_EQ(raised_cosine_taper(12.5, 12.0, 4.0), 0.0);
  EXPECT_NEAR(raised_cosine_taper(10.0, 12.0, 4.0), 0.5, 1e-15);
}

TEST(FundamentalSolution, DecayFitIsPositiveAndGood) {
  const DecayFitReport fit = verify_x_decay(2.0, 6.0, 21, SEvalConfig{});
  ASSERT_TRUE(fit.ok);
  EXPECT_GT(fit.c0_hat, 0.0);
  EXPECT_GE(fit.r2, 0.99);
  EXPECT_EQ(fit.samples.size(), 21u);
}

TEST(FundamentalSolution, YDecayMaximumIsInterior) {
  for (int m : {0, 4}) {
    const YDecayReport r = verify_y_decay(m, 1.0, 20.0, SEvalConfig{});
    EXPECT_TRUE(r.interior) << m;
    EXPECT_LT(r.edge_value, r.sup_value);
  }
}

TEST(ConvolutionKernel, UnitMassAndSamples) {
  const ConvolutionKernel k;
  EXPECT_NEAR(k.table_mass(), 1.0, 1e-6);
  const int mid = k.points() / 2;
  EXPECT_NEAR(k.coordinate(mid), 0.0, 1e-12);
  EXPECT_NEAR(k.sample(mid, mid), 0.083303222633247996, 1e-8);
}

TEST(ConvolutionKernel, ConvolutionMatchesSpectralFlow) {
  const Grid2D g = Grid2D::centered(64, 32.0);
  const RealField u0 = RealField::from_function(g, [](double x, double y) { return std::exp(-(x * x + y * y) / 4.0); });
  const ConvolutionKernel k;
  for (double t : {0.25, 1.0}) {
    const RealField a = linear_solution_via_convolution(u0, t, k);
    const RealField b = linear_propagate(u0, t, DispersionSymbol::asymmetric());
    EXPECT_LT(l2_norm(a - b) / l2_norm(b), 1e-6) << t;
  }
}
