#include <gtest/gtest.h>

#include <cmath>

#include "zklab/interpolation.hpp"

using namespace zklab;

namespace {

RealField sample(const GaussianMixture& m, int n = 64, double L = 24.0) {
  return RealField::from_function(Grid2D::centered(n, L), [&](double x, double y) { return m(x, y); });
}

}  // namespace

TEST(Interpolation, CorpusIsDeterministic) {
  const auto a = mixture_corpus(10, 42), b = mixture_corpus(10, 42), c = mixture_corpus(10, 43);
  ASSERT_EQ(a.size(), 10u);
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_EQ(a[k].bumps.size(), b[k].bumps.size());
    EXPECT_EQ(a[k](0.3, -0.2), b[k](0.3, -0.2));
    EXPECT_GE(a[k].bumps.size(), 1u);
    EXPECT_LE(a[k].bumps.size(), 3u);
  }
  EXPECT_NE(a[0](0.3, -0.2), c[0](0.3, -0.2));
}

TEST(Interpolation, RatiosAreHomogeneousOfDegreeZero) {
  const auto corpus = mixture_corpus(5, 1);
  const struct {
    InterpLemma l;
    double s, p, th;
  } cases[] = {{InterpLemma::L26, 2.0, 1.0, 0.25}, {InterpLemma::L27, 4.0, 1.5, 0.3}, {InterpLemma::LB1, 4.0, 0.5, 0.5}};
  for (const auto& cs : cases) {
    for (const auto& m : corpus) {
      const RealField f = sample(m);
      const double r1 = interp_check(cs.l, f, cs.s, cs.p, cs.th).ratio;
      const double r7 = interp_check(cs.l, 7.0 * f, cs.s, cs.p, cs.th).ratio;
      EXPECT_NEAR(r7 / r1, 1.0, 1e-10) << interp_lemma_name(cs.l);
      EXPECT_TRUE(std::isfinite(r1));
    }
  }
}

TEST(Interpolation, EndpointThetaIsIdentity) {
  const RealField f = sample(mixture_corpus(1, 9)[0]);
  EXPECT_NEAR(interp_check(InterpLemma::LB1, f, 4.0, 0.5, 1.0).ratio, 1.0, 1e-10);
}

TEST(Interpolation, RatioStableUnderRefinement) {
  for (const auto& m : mixture_corpus(5, 3)) {
    const double coarse = interp_check(InterpLemma::L27, sample(m, 64), 4.0, 1.5, 0.3).ratio;
    const double fine = interp_check(InterpLemma::L27, sample(m, 128), 4.0, 1.5, 0.3).ratio;
    EXPECT_NEAR(fine / coarse, 1.0, 0.1);
  }
}

TEST(Interpolation, ParameterRangesEnforced) {
  const RealField f = sample(mixture_corpus(1, 2)[0]);
  EXPECT_THROW(interp_check(InterpLemma::L26, f, -1.0, 1.0, 0.5), ZklabError);
  EXPECT_THROW(interp_check(InterpLemma::L27, f, 4.0, 1.5, 1.0), ZklabError);
  EXPECT_THROW(interp_check(InterpLemma::LB1, f, 4.0, 0.5, 1.5), ZklabError);
  EXPECT_THROW(interp_check(InterpLemma::LB1, f, 4.0, 0.0, 0.5), ZklabError);
}

TEST(Interpolation, ContaminatedFieldIsInconclusive) {
  const GaussianMixture edge{{{1.0, 11.0, 11.0, 1.0}}};
  const InterpReport r = interp_check(InterpLemma::LB1, sample(edge), 4.0, 2.0, 0.5);
  EXPECT_FALSE(r.conclusive);
  EXPECT_GT(r.edge_fraction, 0.0);
}
