#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "zklab/fft.hpp"
#include "zklab/quadrature.hpp"
#include "zklab/spectral.hpp"

using namespace zklab;

namespace {

constexpr double kPi = std::numbers::pi;

RealField trig_field(const Grid2D& g) {
  const double k = 2.0 * kPi / g.Lx;
  return RealField::from_function(g, [k](double x, double y) {
    return 1.5 + std::cos(3 * k * x) * std::sin(2 * k * y) - 0.25 * std::sin(5 * k * (x + y));
  });
}

double max_diff(const RealField& a, const RealField& b) { return (a - b).max_abs(); }

}  // namespace

TEST(Grid, CenteredLayout) {
  const Grid2D g = Grid2D::centered(8, 4.0);
  EXPECT_DOUBLE_EQ(g.x(0), -2.0);
  EXPECT_DOUBLE_EQ(g.dx(), 0.5);
  EXPECT_EQ(g.index(3, 2), 19u);
  EXPECT_EQ(g.mode_x(4), -4);
  EXPECT_EQ(g.mode_x(3), 3);
  EXPECT_DOUBLE_EQ(g.kx(1), 2.0 * kPi / 4.0);
}

TEST(Grid, RejectsBadSizes) {
  EXPECT_THROW(Grid2D::centered(0, 1.0).validate(), ZklabError);
  EXPECT_THROW(Grid2D::centered(8, -1.0).validate(), ZklabError);
}

TEST(Spectral, ConstantHasOnlyMeanCoefficient) {
  const Grid2D g = Grid2D::centered(16, 10.0);
  const SpectralField s = forward_transform(RealField::from_function(g, [](double, double) { return 2.5; }));
  EXPECT_NEAR(s.at(0, 0).real(), 2.5, 1e-15);
  double rest = 0.0;
  for (std::size_t k = 1; k < s.coeffs.size(); ++k) rest = std::max(rest, std::abs(s.coeffs[k]));
  EXPECT_LT(rest, 1e-15);
}

TEST(Spectral, SingleModeCoefficient) {
  // cos(k x) = (e^{ikx} + e^{-ikx}) / 2 with x measured from x0.
  const Grid2D g = Grid2D::centered(16, 2.0 * kPi);
  const RealField f = RealField::from_function(g, [&](double x, double) { return std::cos(2.0 * (x - g.x0)); });
  const SpectralField s = forward_transform(f);
  EXPECT_NEAR(s.at(2, 0).real(), 0.5, 1e-15);
  EXPECT_NEAR(s.at(14, 0).real(), 0.5, 1e-15);
}

TEST(Spectral, ParsevalAndRoundTripProperty) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> nd;
  for (int n : {8, 30, 64}) {
    const Grid2D g = Grid2D::centered(n, n + 2, 7.0, 9.0);
    RealField f(g);
    for (auto& v : f.values) v = nd(rng);
    const SpectralField s = forward_transform(f);
    EXPECT_NEAR(coefficient_energy(s), integrate(pointwise_product(f, f)), 1e-12 * integrate(pointwise_product(f, f)));
    EXPECT_LT(l2_norm(inverse_transform(s) - f), 1e-13 * l2_norm(f));
  }
}

TEST(Spectral, DerivativesOfTrigPolynomialAreExact) {
  const Grid2D g = Grid2D::centered(32, 6.0);
  const double k = 2.0 * kPi / g.Lx;
  const RealField f = trig_field(g);
  const RealField fx = RealField::from_function(g, [k](double x, double y) {
    return -3 * k * std::sin(3 * k * x) * std::sin(2 * k * y) - 1.25 * k * std::cos(5 * k * (x + y));
  });
  const RealField fyy = RealField::from_function(g, [k](double x, double y) {
    return -4 * k * k * std::cos(3 * k * x) * std::sin(2 * k * y) + 6.25 * k * k * std::sin(5 * k * (x + y));
  });
  EXPECT_LT(max_diff(derivative(f, 1, 0), fx), 1e-12);
  EXPECT_LT(l2_norm(derivative(f, 0, 2) - fyy) / l2_norm(fyy), 1e-13);
}

TEST(Spectral, OddDerivativeZeroesNyquist) {
  const Grid2D g = Grid2D::centered(8, 8.0);
  const RealField f = RealField::from_function(g, [&](double x, double) { return std::cos(kPi * (x - g.x0)); });
  EXPECT_LT(derivative(f, 1, 0).max_abs(), 1e-14);
}

TEST(Spectral, IntegrateAndInner) {
  const Grid2D g = Grid2D::centered(64, 20.0);
  const RealField f = RealField::from_function(g, [](double x, double y) { return std::exp(-x * x - y * y); });
  EXPECT_NEAR(integrate(f), kPi, 1e-12);
  EXPECT_NEAR(inner(f, f), 0.5 * kPi, 1e-12);
  EXPECT_NEAR(l2_norm(f), std::sqrt(0.5 * kPi), 1e-12);
}

TEST(Spectral, DealiasKeepsLowModes) {
  const Grid2D g = Grid2D::centered(24, 2.0 * kPi);
  const RealField f = RealField::from_function(
      g, [&](double x, double y) { return std::cos(2 * (x - g.x0)) + std::cos(11 * (y - g.y0)); });
  const RealField low = inverse_transform(dealias(forward_transform(f), 2.0 / 3.0));
  const RealField expect = RealField::from_function(g, [&](double x, double) { return std::cos(2 * (x - g.x0)); });
  EXPECT_LT(l2_norm(low - expect), 1e-13);
}

TEST(Spectral, UpsampleAndInterpolantAreExactForTrigPolynomials) {
  const Grid2D g = Grid2D::centered(32, 6.0);
  const RealField f = trig_field(g);
  const RealField up = upsample(forward_transform(f), 3);
  EXPECT_EQ(up.grid.nx, 96);
  EXPECT_LT(l2_norm(up - trig_field(up.grid)) / l2_norm(up), 1e-13);

  const SpectralInterpolant interp(f);
  const double k = 2.0 * kPi / g.Lx;
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int i = 0; i < 50; ++i) {
    const double x = u(rng), y = u(rng);
    const double exact =
        1.5 + std::cos(3 * k * x) * std::sin(2 * k * y) - 0.25 * std::sin(5 * k * (x + y));
    EXPECT_NEAR(interp(x, y), exact, 1e-12);
  }
  const auto tensor = interp.on_tensor({-1.0, 0.5}, {0.25, 2.0});
  EXPECT_NEAR(tensor[1], interp(0.5, 0.25), 1e-14);
  EXPECT_NEAR(tensor[2], interp(-1.0, 2.0), 1e-14);
}

TEST(Spectral, RejectsNonFiniteInput) {
  const Grid2D g = Grid2D::centered(8, 1.0);
  RealField f(g);
  f.values[3] = std::nan("");
  EXPECT_THROW(forward_transform(f), ZklabError);
}

TEST(Spectral, ThreadCountDoesNotChangeResults) {
  const Grid2D g = Grid2D::centered(64, 6.0);
  const RealField f = trig_field(g);
  fft::set_threads(1);
  const SpectralField a = forward_transform(f);
  fft::set_threads(2);
  const SpectralField b = forward_transform(f);
  fft::set_threads(1);
  double m = 0.0;
  for (std::size_t k = 0; k < a.coeffs.size(); ++k) m = std::max(m, std::abs(a.coeffs[k] - b.coeffs[k]));
  EXPECT_LT(m, 1e-15);
}

TEST(Quadrature, TwoPointRule) {
  const GaussRule& r = gauss_legendre(2);
  EXPECT_NEAR(r.nodes[0], -1.0 / std::sqrt(3.0), 1e-15);
  EXPECT_NEAR(r.weights[1], 1.0, 1e-15);
}

TEST(Quadrature, ExactForPolynomialsOfDegree2nMinus1) {
  for (int n : {3, 8, 17, 40}) {
    std::vector<double> x, w;
    gauss_on_interval(n, -0.5, 2.0, x, w);
    const int p = 2 * n - 1;
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * std::pow(x[i], p);
    const double exact = (std::pow(2.0, p + 1) - std::pow(-0.5, p + 1)) / (p + 1);
    EXPECT_NEAR(s, exact, 1e-12 * std::abs(exact)) << n;
  }
}
