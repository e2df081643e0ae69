#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "zklab/smoothing.hpp"

using namespace zklab;

TEST(Multiplier, M0ReferenceValues) {
  EXPECT_NEAR(m0_eval(0, 0, 0, 1, 1).product_form.real(), -0.5, 1e-16);
  // 1 / (i tau + (i xi - 1)^3 + (i eta - 1)^3) at (0.4, 1.3, -2), from numpy
  const M0Value v = m0_eval(0.4, 1.3, -2.0, 1.0, 1.0);
  EXPECT_NEAR(v.product_form.real(), 0.26678849256310166, 1e-15);
  EXPECT_NEAR(v.product_form.imag(), -0.06305226627054712, 1e-15);
  EXPECT_THROW(m0_eval(0, 0, 0, 0, 0), ZklabError);
}

TEST(Multiplier, DualFormsAgreeProperty) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-6.0, 6.0), lb(0.5, 2.0);
  for (int i = 0; i < 2000; ++i) {
    const double lambda = lb(rng), beta = lb(rng);
    const M0Value v = m0_eval(u(rng), u(rng), 10.0 * u(rng), lambda, beta);
    if (v.singular) continue;
    EXPECT_LT(std::abs(v.product_form - v.real_form), 1e-12 * std::abs(v.real_form));
  }
}

TEST(Multiplier, SymbolOrders) {
  const MultiplierSymbol m{1.0, 1.0, 1, 1};
  const cplx d = m.denominator(0.3, -0.4, 1.1);
  EXPECT_LT(std::abs(m(0.3, -0.4, 1.1) - cplx(-1.0, 0.3) * cplx(-1.0, -0.4) / d), 1e-15);
  EXPECT_THROW((MultiplierSymbol{1.0, 1.0, 2, 1}.validate()), ZklabError);
}

TEST(PartialFractions, ReferenceValueAndProperty) {
  // -i z^2 / (z^3 + w^3 - tau) with z = 0.7 + i, w = -0.3 + i, tau = 2.5, from numpy
  const cplx d = m20_direct(0.7, -0.3, 2.5, 1.0, 1.0);
  EXPECT_NEAR(d.real(), -0.42279506237316666, 1e-15);
  EXPECT_NEAR(d.imag(), -0.118224965656908, 1e-15);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int i = 0; i < 500; ++i) {
    const double xi = u(rng), eta = u(rng), tau = 10.0 * u(rng);
    const PartialFractions pf = partial_fractions_m20(eta, tau, 1.0, 1.0);
    if (pf.ill_conditioned) continue;
    const cplx ref = m20_direct(xi, eta, tau, 1.0, 1.0);
    EXPECT_LT(std::abs(pf.evaluate(xi) - ref), 1e-10 * std::abs(ref));
  }
}

TEST(SpaceTimeMultiplier, HInvertsT0) {
  const Grid3D g{48, 48, 48, 12.0, 12.0, 12.0};
  const Field3D h = Field3D::from_function(g, Bump3D{1.0, 0.5, -0.3, 0.2, 1.0, 1.2, 0.8});
  const T0Result t0 = apply_T0(h, MultiplierSymbol{1.0, 1.0, 0, 0});
  EXPECT_EQ(t0.skipped_nodes, 0);
  const Field3D back = apply_H(t0.field, 1.0, 1.0);
  double e = 0.0;
  for (std::size_t k = 0; k < h.data.size(); ++k) e = std::max(e, std::abs(back.data[k] - h.data[k]));
  EXPECT_LT(e, 1e-10);
}

TEST(SpaceTimeMultiplier, CorpusInsideCentralHalf) {
  const Grid3D g{32, 32, 32, 24.0, 24.0, 24.0};
  const auto corpus = smoothing_corpus(10, 7, g);
  ASSERT_EQ(corpus.size(), 10u);
  for (const auto& b : corpus) {
    EXPECT_LE(std::abs(b.cx), 6.0);
    EXPECT_LE(std::abs(b.ct), 6.0);
    EXPECT_LT(support_edge_fraction(Field3D::from_function(g, b)), 1e-6);
  }
}

TEST(SmoothingBounds, SingleBumpSatisfiesBothBounds) {
  const Grid3D g{48, 48, 48, 24.0, 24.0, 24.0};
  const Bump3D b{1.0, 0.0, 0.0, 0.0, 1.0, 1.0, 1.0};
  const BoundReport r62 = check_bound_62(b, g, 1.0, 1.0);
  EXPECT_LE(r62.ratio, 1.0 + r62.eps);
  EXPECT_GT(r62.ratio, 0.0);
  const BoundReport a4 = check_bound_A4(b, g, 1.0, 1.0, 1, 1);
  EXPECT_LE(a4.ratio, 1.0 + a4.eps);
  EXPECT_THROW(check_bound_A4(b, g, 0.5, 1.0, 2, 0), ZklabError);
}
