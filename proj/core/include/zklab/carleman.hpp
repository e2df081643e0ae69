#pragma once

#include <cstdint>
#include <functional>

#include "zklab/evolution.hpp"

namespace zklab {

// Time profile: 0 near both ends, 2 sqrt(2) on [r, 1 - r], quintic smoothstep
// ramps on [r/2, r] and [1 - r, 1 - r/2]. A constant profile is available for
// degenerate checks.
class TimeProfile {
 public:
  static TimeProfile smoothstep(double r);
  static TimeProfile constant(double value);

  double value(double t) const;
  double d1(double t) const;
  double d2(double t) const;
  double sup_d1() const;
  double sup_d2() const;
  double margin() const { return r_; }
  bool is_constant() const { return constant_; }

 private:
  TimeProfile(double r, bool constant, double level) : r_(r), constant_(constant), level_(level) {}
  double r_;
  bool constant_;
  double level_;
};

// phi(x, y, t) = (x/R + p(t))^2 + (y/R + p(t))^2 and its derivatives.
struct CarlemanWeight {
  double R = 1.0;
  TimeProfile profile = TimeProfile::smoothstep(0.25);

  double value(double x, double y, double t) const;
  double dx(double x, double t) const;  // 2 (x/R + p(t)) / R
  double dxx() const { return 2.0 / (R * R); }
  double dt(double x, double y, double t) const;
  // |kappa/R + p(t) xi|
  double distance(double x, double y, double t) const;
};

// sqrt(M1 R^3), M1 = max(||p'||, ||p''||^{1/2}, 1)
double min_alpha(double R, const TimeProfile& profile);

struct BumpDerivs {
  double v, d1, d2, d3;
};

// (1 - s^2)^4 on |s| < 1 with s = (u - centre) / half_width.
BumpDerivs bump(double u, double centre, double half_width);

// amplitude * B(x) B(y) B(t), separable polynomial bump.
struct TestFunctionG {
  double cx = 0.0, cy = 0.0;
  double hx = 1.0, hy = 1.0;
  double t0 = 0.25, t1 = 0.75;
  double amplitude = 1.0;

  double tc() const { return 0.5 * (t0 + t1); }
  double ht() const { return 0.5 * (t1 - t0); }
  bool is_zero() const { return amplitude == 0.0; }
};

// Smallest |kappa/R + p(t) xi| - 1 over a samples^3 lattice on the support box.
double admissibility_margin(const TestFunctionG& g, const CarlemanWeight& w, int samples = 64);

// Random admissible bump. Support sizes keep alpha_hint * (variation of phi)
// small enough for the tensor Gauss rule; alpha_hint <= 0 means 2 * min_alpha.
TestFunctionG generate_admissible_g(std::uint64_t seed, double R, const TimeProfile& profile, double alpha_hint = 0.0);

struct SplitReport {
  double h_norm = 0.0;
  double split_error = 0.0;       // ||Hf - (Af + Sf)|| / ||Hf||
  double skew_pairing = 0.0;      // |<Af, f>| / (||Af|| ||f||)
  double symmetry_gap = 0.0;      // |<Sf, h> - <f, Sh>| / (||Sf|| ||h|| + ||f|| ||Sh||)
  double energy_gap = 0.0;        // (||(A+S)f||^2 - <[S,A]f,f>) / ||(A+S)f||^2
};

// f = e^{alpha phi} g and h = e^{alpha phi} g2 (common log shift). Evaluates A f
// and S f from the displayed formulas and H f = e^{alpha phi} (d_t + d_x^3 + d_y^3) g.
SplitReport conjugated_apply(const TestFunctionG& g, const TestFunctionG& g2, double alpha,
                             const CarlemanWeight& w, int order = 32);

using SpaceTimeField = std::function<double(double x, double y, double t)>;

struct LowerOrderCoefficients {
  SpaceTimeField a0;
  SpaceTimeField a1;
};

// a0 = 4^{-1/3} (d_x + d_y) u2 and a1 = 4^{-1/3} u1 from two symmetric-equation
// runs with common snapshot times. Snapshots are refined spectrally by
// `refine`, then read bicubically in space and linearly in time.
LowerOrderCoefficients coefficients_from_trajectories(const Trajectory& u1, const Trajectory& u2, int refine = 2);

struct CarlemanReport {
  double R = 0.0;
  double alpha = 0.0;
  double lhs_term1 = 0.0;        // alpha^{5/2}/R^3 ||e^{a phi} phi g||
  double lhs_term2 = 0.0;        // alpha^{3/2}/R^2 ||e^{a phi} |grad g| ||
  double rhs = 0.0;
  double ratio = 0.0;
  double lhs_term1_phi2 = 0.0;   // same with phi^2 in place of phi
  double ratio_phi2 = 0.0;
  double perturbation = 0.0;     // ||e^{a phi}(a1 (g_x + g_y) + a0 g)|| / ||e^{a phi} L g||
  double eps_disc = 0.0;         // relative ratio change from order to 2*order
  double log_shift = 0.0;        // common factor e^{-log_shift} applied to every norm
  bool vacuous = false;
};

CarlemanReport check_inequality_18(const TestFunctionG& g, double R, double alpha, const TimeProfile& profile,
                                   int order = 32);
CarlemanReport check_inequality_24(const TestFunctionG& g, double R, double alpha, const TimeProfile& profile,
                                   const LowerOrderCoefficients& coeffs, int order = 32);

}  // namespace zklab
