#include <gtest/gtest.h>

#include <cmath>
#include <cstring>

#include "zklab/carleman.hpp"

using namespace zklab;

TEST(TimeProfile, PlateauAndEnds) {
  const TimeProfile p = TimeProfile::smoothstep(0.25);
  EXPECT_DOUBLE_EQ(p.value(0.0), 0.0);
  EXPECT_DOUBLE_EQ(p.value(0.1), 0.0);
  EXPECT_NEAR(p.value(0.5), 2.0 * std::sqrt(2.0), 1e-15);
  EXPECT_DOUBLE_EQ(p.value(1.0), 0.0);
  EXPECT_NEAR(p.d1(0.5), 0.0, 1e-15);
  const double h = 1e-6;
  EXPECT_NEAR(p.d1(0.2), (p.value(0.2 + h) - p.value(0.2 - h)) / (2 * h), 1e-6);
  EXPECT_THROW(TimeProfile::smoothstep(0.7), ZklabError);
}

TEST(MinAlpha, ScalesAsRToThreeHalves) {
  const TimeProfile p = TimeProfile::smoothstep(0.25);
  EXPECT_NEAR(min_alpha(4.0, p) / min_alpha(1.0, p), 8.0, 1e-12);
  EXPECT_NEAR(min_alpha(4.0, TimeProfile::constant(0.0)), 8.0, 1e-14);
}

TEST(Bump, ValuesAndSupport) {
  const BumpDerivs b = bump(0.0, 0.0, 1.0);
  EXPECT_DOUBLE_EQ(b.v, 1.0);
  EXPECT_DOUBLE_EQ(b.d1, 0.0);
  EXPECT_DOUBLE_EQ(bump(1.5, 0.0, 1.0).v, 0.0);
  EXPECT_NEAR(bump(0.5, 0.0, 1.0).v, std::pow(0.75, 4), 1e-15);
}

TEST(Carleman, GeneratedSupportsAreAdmissible) {
  const TimeProfile p = TimeProfile::smoothstep(0.25);
  for (double R : {1.0, 2.0, 4.0}) {
    for (std::uint64_t s = 0; s < 5; ++s) {
      const TestFunctionG g = generate_admissible_g(s, R, p);
      EXPECT_GT(admissibility_margin(g, CarlemanWeight{R, p}), 0.0);
      EXPECT_GE(g.t0, p.margin() * 0.5);
    }
  }
}

TEST(Carleman, SplitIdentitiesHold) {
  const TimeProfile p = TimeProfile::smoothstep(0.25);
  const double R = 2.0;
  const TestFunctionG g = generate_admissible_g(7, R, p);
  TestFunctionG h = g;
  h.cx += 0.2 * g.hx;
  const SplitReport r = conjugated_apply(g, h, min_alpha(R, p), CarlemanWeight{R, p});
  EXPECT_LT(r.split_error, 1e-8);
  EXPECT_LT(r.skew_pairing, 1e-8);
  EXPECT_LT(r.symmetry_gap, 1e-8);
  EXPECT_GE(r.energy_gap, 0.0);
}

TEST(Carleman, InequalityHoldsAndIsScaleInvariant) {
  const TimeProfile p = TimeProfile::smoothstep(0.25);
  for (double R : {1.0, 4.0}) {
    const TestFunctionG g = generate_admissible_g(3, R, p);
    const double alpha = 2.0 * min_alpha(R, p);
    const CarlemanReport r = check_inequality_18(g, R, alpha, p);
    EXPECT_FALSE(r.vacuous);
    EXPECT_LE(r.eps_disc, 0.05);
    EXPECT_LE(r.ratio, std::sqrt(3.0) * (1.0 + r.eps_disc));
    TestFunctionG g3 = g;
    g3.amplitude *= 3.0;
    EXPECT_NEAR(check_inequality_18(g3, R, alpha, p).ratio / r.ratio, 1.0, 1e-12);
  }
}

TEST(Carleman, ZeroCoefficientsReproduceEighteenBitwise) {
  const TimeProfile p = TimeProfile::smoothstep(0.25);
  const LowerOrderCoefficients zero{[](double, double, double) { return 0.0; },
                                    [](double, double, double) { return 0.0; }};
  const TestFunctionG g = generate_admissible_g(11, 2.0, p);
  const double alpha = min_alpha(2.0, p);
  const CarlemanReport a = check_inequality_18(g, 2.0, alpha, p);
  const CarlemanReport b = check_inequality_24(g, 2.0, alpha, p, zero);
  EXPECT_EQ(std::memcmp(&a.ratio, &b.ratio, sizeof(double)), 0);
  EXPECT_EQ(std::memcmp(&a.rhs, &b.rhs, sizeof(double)), 0);
  EXPECT_EQ(b.perturbation, 0.0);
}

TEST(Carleman, CoefficientsFromTrajectoriesMatchSnapshots) {
  const Grid2D grid = Grid2D::centered(64, 32.0);
  SolverConfig cfg;
  cfg.dt = 0.01;
  cfg.t_end = 0.2;
  cfg.snapshot_interval = 0.1;
  cfg.nonlinear_form = NonlinearForm::Symmetric;
  const auto sym = DispersionSymbol::symmetric();
  const auto gauss = [](double cx) {
    return [cx](double x, double y) { return 0.1 * std::exp(-((x - cx) * (x - cx) + y * y) / 8.0); };
  };
  const Trajectory u1 = zk_solve(RealField::from_function(grid, gauss(0.0)), cfg, sym);
  const Trajectory u2 = zk_solve(RealField::from_function(grid, gauss(1.0)), cfg, sym);
  const LowerOrderCoefficients c = coefficients_from_trajectories(u1, u2);
  const double coupling = std::pow(4.0, -1.0 / 3.0);
  // On grid nodes at snapshot times the interpolants reproduce the samples.
  const int i = 37, j = 30;
  EXPECT_NEAR(c.a1(grid.x(i), grid.y(j), 0.1), coupling * u1.snapshots[1].at(i, j), 1e-12);
  // Midway in time the reading is the average of the neighbours.
  EXPECT_NEAR(c.a1(grid.x(i), grid.y(j), 0.05),
              0.5 * coupling * (u1.snapshots[0].at(i, j) + u1.snapshots[1].at(i, j)), 1e-12);
  Trajectory bad = u2;
  bad.times[1] += 0.01;
  EXPECT_THROW(coefficients_from_trajectories(u1, bad), ZklabError);
}
