#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "zklab/evolution.hpp"
#include "zklab/spectral.hpp"

using namespace zklab;

namespace {

RealField gaussian(const Grid2D& g, double amp, double w2, double cx = 0.0) {
  return RealField::from_function(
      g, [=](double x, double y) { return amp * std::exp(-((x - cx) * (x - cx) + y * y) / w2); });
}

}  // namespace

TEST(Dispersion, SymbolValues) {
  EXPECT_DOUBLE_EQ(DispersionSymbol::asymmetric()(2.0, 3.0), 8.0 + 18.0);
  EXPECT_DOUBLE_EQ(DispersionSymbol::symmetric()(2.0, 3.0), 8.0 + 27.0);
  EXPECT_DOUBLE_EQ(symmetric_coupling(), std::pow(4.0, -1.0 / 3.0));
  EXPECT_EQ(matching_form(DispersionSymbol::symmetric()), NonlinearForm::Symmetric);
}

TEST(LinearFlow, SingleModeIsExact) {
  // u_t + u_xxx + u_xyy = 0 carries cos(kx + ly) to cos(kx + ly + t(k^3 + k l^2)).
  const Grid2D g = Grid2D::centered(32, 2.0 * std::numbers::pi);
  const int k = 3, l = 2;
  const double t = 0.37;
  const RealField u0 = RealField::from_function(g, [&](double x, double y) { return std::cos(k * x + l * y); });
  const RealField asym = linear_propagate(u0, t, DispersionSymbol::asymmetric());
  const RealField sym = linear_propagate(u0, t, DispersionSymbol::symmetric());
  const double wa = k * k * k + k * l * l, ws = k * k * k + l * l * l;
  const RealField ea = RealField::from_function(g, [&](double x, double y) { return std::cos(k * x + l * y + wa * t); });
  const RealField es = RealField::from_function(g, [&](double x, double y) { return std::cos(k * x + l * y + ws * t); });
  EXPECT_LT((asym - ea).max_abs(), 1e-12);
  EXPECT_LT((sym - es).max_abs(), 1e-12);
}

TEST(LinearFlow, UnitaryAndGroupLawProperty) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  const Grid2D g = Grid2D::centered(64, 32.0);
  const RealField u0 = gaussian(g, 1.0, 4.0, 1.0);
  for (const auto& sym : {DispersionSymbol::asymmetric(), DispersionSymbol::symmetric()}) {
    for (int trial = 0; trial < 5; ++trial) {
      const double s = u(rng), t = u(rng);
      const RealField a = linear_propagate(linear_propagate(u0, s, sym), t, sym);
      const RealField b = linear_propagate(u0, s + t, sym);
      EXPECT_LT(l2_norm(a - b) / l2_norm(u0), 1e-12);
      EXPECT_NEAR(l2_norm(b) / l2_norm(u0), 1.0, 1e-12);
      EXPECT_LT(l2_norm(linear_propagate(b, -(s + t), sym) - u0) / l2_norm(u0), 1e-12);
    }
  }
}

TEST(Solver, ConservesMassAndL2) {
  const Grid2D g = Grid2D::centered(64, 32.0);
  SolverConfig cfg;
  cfg.dt = 0.01;
  cfg.t_end = 0.5;
  for (const auto& sym : {DispersionSymbol::asymmetric(), DispersionSymbol::symmetric()}) {
    cfg.nonlinear_form = matching_form(sym);
    const Trajectory tr = zk_solve(gaussian(g, 1.0, 4.0), cfg, sym);
    ASSERT_FALSE(tr.aborted);
    EXPECT_EQ(tr.diagnostics.size(), 51u);
    const double m0 = tr.diagnostics.front().mass, l0 = tr.diagnostics.front().l2;
    for (const auto& d : tr.diagnostics) {
      EXPECT_NEAR(d.mass, m0, 1e-12 * std::abs(m0));
      EXPECT_NEAR(d.l2, l0, 1e-8 * l0);
    }
  }
}

TEST(Solver, OffFormReducesToLinearFlow) {
  const Grid2D g = Grid2D::centered(64, 32.0);
  SolverConfig cfg;
  cfg.dt = 0.05;
  cfg.t_end = 1.0;
  cfg.nonlinear_form = NonlinearForm::Off;
  const RealField u0 = gaussian(g, 1.0, 4.0);
  const auto sym = DispersionSymbol::symmetric();
  const RealField a = zk_solve(u0, cfg, sym).final_state();
  EXPECT_LT(l2_norm(a - linear_propagate(u0, 1.0, sym)) / l2_norm(u0), 1e-12);
}

TEST(Solver, FourthOrderInTime) {
  const Grid2D g = Grid2D::centered(64, 32.0);
  SolverConfig cfg;
  cfg.t_end = 0.5;
  const RealField u0 = gaussian(g, 1.0, 4.0);
  RealField u[3];
  for (int k = 0; k < 3; ++k) {
    cfg.dt = 0.02 / (1 << k);
    u[k] = zk_solve(u0, cfg, DispersionSymbol::asymmetric()).final_state();
  }
  const double ratio = l2_norm(u[0] - u[1]) / l2_norm(u[1] - u[2]);
  EXPECT_GT(ratio, 12.0);
  EXPECT_LT(ratio, 20.0);
}

TEST(Solver, SnapshotsAtRequestedSpacing) {
  const Grid2D g = Grid2D::centered(32, 32.0);
  SolverConfig cfg;
  cfg.dt = 0.01;
  cfg.t_end = 0.2;
  cfg.snapshot_interval = 0.05;
  const Trajectory tr = zk_solve(gaussian(g, 0.1, 4.0), cfg, DispersionSymbol::symmetric());
  ASSERT_EQ(tr.times.size(), 5u);
  EXPECT_NEAR(tr.times[2], 0.1, 1e-12);
  EXPECT_EQ(tr.snapshots.size(), tr.times.size());
}

TEST(Solver, RejectsStepAboveRateBound) {
  const Grid2D g = Grid2D::centered(64, 32.0);
  SolverConfig cfg;
  cfg.dt = 0.5;
  EXPECT_THROW(zk_solve(gaussian(g, 100.0, 4.0), cfg, DispersionSymbol::asymmetric()), ZklabError);
  const double small = cfl_time_step(g, 1.0, NonlinearForm::Asymmetric, 2.0 / 3.0, 0.5);
  const double large = cfl_time_step(g, 10.0, NonlinearForm::Asymmetric, 2.0 / 3.0, 0.5);
  EXPECT_NEAR(small / large, 10.0, 1e-12);
}

TEST(Solver, ConfigValidation) {
  SolverConfig cfg;
  cfg.dt = -1.0;
  EXPECT_THROW(cfg.validate(), ZklabError);
  cfg = SolverConfig{};
  cfg.dealias_fraction = 1.5;
  EXPECT_THROW(cfg.validate(), ZklabError);
}

TEST(Difference, CoefficientsAndResidual) {
  const Grid2D g = Grid2D::centered(64, 32.0);
  const RealField u1 = gaussian(g, 0.5, 4.0), u2 = gaussian(g, 0.5, 4.0, 1.0);
  const DifferenceCoefficients c = difference_coefficients(u1, u2);
  const double coupling = std::pow(4.0, -1.0 / 3.0);
  EXPECT_LT(l2_norm(c.a1 - coupling * u1), 1e-14);
  EXPECT_LT(l2_norm(c.a0 - coupling * (derivative(u2, 1, 0) + derivative(u2, 0, 1))), 1e-12);

  const DifferenceResidual r = difference_residual(u1, u2, 0.2, 0.005, 0.01);
  EXPECT_GT(r.dt_term, 0.0);
  EXPECT_LT(r.residual, 1e-4 * r.dt_term);
}
