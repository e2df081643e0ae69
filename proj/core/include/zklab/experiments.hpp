#pragma once

#include <string>
#include <vector>

#include "zklab/evolution.hpp"
#include "zklab/grid.hpp"
#include "zklab/weights.hpp"

namespace zklab {

// Centered Gaussian amplitude * exp(-((x - cx)^2 + (y - cy)^2) / width^2).
struct GaussianDatum {
  double amplitude = 1.0;
  double width = 1.0;
  double cx = 0.0;
  double cy = 0.0;

  double operator()(double x, double y) const;
  void validate() const;
};

// Fields of the symmetric equation at the requested times. Linear runs use the
// exact flow; nonlinear runs step with `dt` and sample at the nearest step.
std::vector<RealField> symmetric_samples(const RealField& u0, const std::vector<double>& times, bool nonlinear,
                                         double dt);

std::vector<double> uniform_times(double t_end, int count);

struct Decay15Config {
  int n = 512;
  double L = 64.0;
  double a0 = 1.0;
  double t_end = 0.5;
  int samples = 11;
  GaussianDatum datum{1e-6, 1.0};
  bool nonlinear = false;
  double dt = 1e-3;
  double w_cap = 10.0;
  WeightWindow window{0.05, 0.05, 14.0, 2.0};

  void validate() const;
};

struct Decay15Point {
  double t = 0.0;
  double a_t = 0.0;
  double w_adaptive = 0.0;
  double w_frozen = 0.0;
};

struct Decay15Report {
  std::vector<Decay15Point> curve;
  double max_adaptive = 0.0;
  double max_frozen = 0.0;
  bool frozen_exceeds = false;
  bool within_cap = false;
  double a_end = 0.0;
  double a_end_closed_form = 0.0;
  double cap_sensitivity = 0.0;  // relative change of the norms when the diagonal cap moves in by z_ramp
  bool conclusive = true;
};

Decay15Report run_decay15(const Decay15Config& cfg);

struct PersistenceConfig {
  int n = 256;
  double L = 64.0;
  double beta = 0.5;
  std::vector<int> ns{4, 8, 16};
  double t_end = 1.0;
  int samples = 21;
  GaussianDatum datum{1e-6, 1.0};
  bool nonlinear = false;
  double dt = 1e-3;
  double spread_tol = 0.2;
  WeightWindow window{0.05, 0.05, 40.0, 4.0};

  void validate() const;
};

struct PersistenceCurve {
  int n = 0;
  std::vector<double> growth;         // G_n(t)
  std::vector<double> mirror_growth;  // same for the reflected, time-reversed run
  double c_hat = 0.0;
  double mirror_gap = 0.0;            // max |mirror(t) - G(t_end - t)/G(t_end)|
};

struct PersistenceReport {
  std::vector<double> times;
  std::vector<PersistenceCurve> curves;
  double spread = 0.0;
  bool finite = true;
  bool stable = false;
};

PersistenceReport run_persistenceB(const PersistenceConfig& cfg);

// Q_R = {R - 1 <= |x + y| <= R and R - 1 <= |x - y| <= R}
bool in_annulus_region(double R, double x, double y);

struct AnnulusConfig {
  int n = 256;
  double L = 64.0;
  GaussianDatum first{0.5, 2.0};
  GaussianDatum second{0.5, 2.0, 1.0, 0.0};
  double dt = 0.01;
  double snapshot_interval = 0.05;
  double t_end = 1.0;
  std::vector<double> radii{3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14};
  double edge_margin = 4.0;     // annuli must stay this far inside the box
  double noise_floor = 1e-10;   // relative to the full space-time norm of v
  int quadrature_n = 1024;      // common upsampled lattice for the annulus integrals
  bool refine = true;

  void validate() const;
};

struct AnnulusRow {
  double R = 0.0;
  double norm = 0.0;   // A_R(v)
  double log_norm = 0.0;
  double r32 = 0.0;
  bool trusted = false;
  double refined_log_norm = 0.0;
  double refinement_change = 0.0;
};

struct AnnulusReport {
  std::vector<AnnulusRow> rows;
  double slope = 0.0;
  double intercept = 0.0;
  int trusted_count = 0;
  double max_refinement_change = 0.0;
  bool all_positive = false;
  bool identical_data = false;
  bool nonincreasing_tail = false;
};

// A_R for each radius from snapshots of v on a common grid, trapezoid in time.
std::vector<double> annulus_norms(const std::vector<double>& times, const std::vector<RealField>& v,
                                  const std::vector<double>& radii, int quadrature_n);

AnnulusReport run_annulus_trend(const AnnulusConfig& cfg);

}  // namespace zklab
