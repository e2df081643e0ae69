#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "zklab/coordinates.hpp"

using namespace zklab;

TEST(CoordinateMap, ConstantsAndJacobian) {
  const CoordinateMap m;
  EXPECT_DOUBLE_EQ(m.mu, std::pow(4.0, -1.0 / 3.0));
  EXPECT_DOUBLE_EQ(m.lambda, std::sqrt(3.0) * m.mu);
  // 1 / (2 lambda mu), reference value from mpmath
  EXPECT_NEAR(m.jacobian(), 0.727415757314480935706715076126, 1e-15);
}

TEST(CoordinateMap, RoundTripProperty) {
  const CoordinateMap m;
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  for (int i = 0; i < 1000; ++i) {
    const double x = u(rng), y = u(rng);
    const auto [xs, ys] = m.to_symmetric(x, y);
    const auto [xb, yb] = m.to_original(xs, ys);
    EXPECT_NEAR(xb, x, 1e-13);
    EXPECT_NEAR(yb, y, 1e-13);
    // x' + y' = 2 mu x carries the weight variable
    EXPECT_NEAR(xs + ys, 2.0 * m.mu * x, 1e-12);
  }
}

TEST(CoordinateMap, TransportedRate) {
  // (2 mu)^{3/2} = 2^{1/2} exactly, so a~(1) = 1/sqrt(2).
  EXPECT_NEAR(transport_weight_rate(1.0), 0.707106781186547524, 1e-15);
  EXPECT_NEAR(transport_weight_rate(3.0), 3.0 * transport_weight_rate(1.0), 1e-15);
  EXPECT_THROW(transport_weight_rate(0.0), ZklabError);
}

TEST(CoordinateMap, NormIdentity) {
  const auto f = [](double x, double y) { return std::exp(-(x - 0.5) * (x - 0.5) - y * y); };
  for (double a : {0.5, 1.0}) {
    const NormIdentityReport r = check_norm_identity(f, a, 8.0);
    EXPECT_LT(r.rel_error, 1e-6) << a;
    EXPECT_GT(r.original, 0.0);
  }
}

TEST(Equivalence, LinearRegimeAgreesOnSmallGrid) {
  EquivalenceConfig cfg;
  cfg.n = 96;
  cfg.dt = 0.01;
  cfg.t_end = 0.5;
  const auto rep =
      solve_equivalence_check([](double x, double y) { return 1e-6 * std::exp(-(x * x + y * y) / 8.0); }, cfg);
  EXPECT_GT(rep.samples, 0);
  EXPECT_LT(rep.rel_l2_sampled, 1e-6);
  EXPECT_LT(rep.rel_norm_gap, 1e-6);
}
