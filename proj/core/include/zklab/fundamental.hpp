#pragma once

#include <vector>

#include "zklab/grid.hpp"

namespace zklab {

// Kernel of u_t + u_xxx + u_xyy = 0:
// S(x, y) = (1/4pi^2) * integral of exp(i(xi x + eta y + xi^3 + xi eta^2)) dxi deta.
struct SEvalConfig {
  double xi_max = 12.0;       // frequency truncation radius
  double taper_width = 4.0;   // raised-cosine roll-off width
  int n_quad = 256;           // base panel count
  double tol = 1e-6;          // absolute target

  void validate() const;
  SEvalConfig refined() const;
};

struct SPoint {
  cplx value;
  double refinement_delta = 0.0;  // |coarse - fine|
  bool converged = true;          // refinement_delta <= 10 * tol
};

// Tapered two-dimensional quadrature: inner xi integral numerically for each
// outer eta node. Slow; serves as the reference for the reduced evaluator.
SPoint evaluate_S_direct(double x, double y, const SEvalConfig& cfg);

struct SReduced {
  double value = 0.0;
  double imag = 0.0;              // imaginary part of the full-line sum
  double refinement_delta = 0.0;
  bool converged = true;
};

// Eta integral done in closed form (Fresnel), leaving
// (1/4pi^2) int sqrt(pi) (-i xi)^(-1/2) exp(i(xi x + xi^3 - y^2/(4 xi))) dxi,
// evaluated along Im xi = h where the integrand decays like exp(-3 h s^2).
SReduced evaluate_S_reduced(double x, double y, const SEvalConfig& cfg);

struct DecaySample {
  double x;
  double abs_s;
  double fitted;
};

struct DecayFitReport {
  double c0_hat = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  double r2_linear = 0.0;    // same samples fitted against x instead of x^{3/2}
  double max_residual = 0.0;
  double x_lo = 0.0;
  double x_hi = 0.0;
  int n_used = 0;
  bool ok = false;           // at least five samples above the noise floor
  std::vector<DecaySample> samples;
};

// Least squares of log|S(x, 0)| against const - c0 * x^{3/2}.
DecayFitReport verify_x_decay(double x_lo, double x_hi, int n, const SEvalConfig& cfg);

struct YDecayReport {
  int m = 0;
  double x_fixed = 0.0;
  double y_max = 0.0;
  double sup_value = 0.0;
  double argmax_y = 0.0;
  double edge_value = 0.0;   // largest weighted value in the outer 5% band
  bool interior = false;
  std::vector<double> ys;
  std::vector<double> weighted;  // (1+|y|)^m |S|
};

YDecayReport verify_y_decay(int m, double x_fixed, double y_max, const SEvalConfig& cfg, int n_samples = 161);

// S sampled on a square table from the xi integral done in closed form
// (Airy function), then multiplied by a smooth window so the table can be
// transformed without truncation artefacts.
struct KernelTableConfig {
  double half_width = 96.0;
  double spacing = 0.25;
  double window_taper = 36.0;
  double eta_step = 0.01;

  void validate() const;
};

class ConvolutionKernel {
 public:
  explicit ConvolutionKernel(const KernelTableConfig& cfg = {});

  // Windowed transform of S at frequency (qx, qy).
  std::vector<cplx> transform_at(const std::vector<double>& qx, const std::vector<double>& qy) const;
  double table_mass() const;                   // h^2 * sum of windowed samples
  double sample(int i, int j) const;           // unwindowed S on the table
  double coordinate(int i) const { return -cfg_.half_width + i * cfg_.spacing; }
  int points() const { return n_; }
  const KernelTableConfig& config() const { return cfg_; }

 private:
  KernelTableConfig cfg_;
  int n_ = 0;
  std::vector<double> s_;        // S(X_i, Y_j) at index j * n + i
  std::vector<double> window_;   // per-axis window
};

// u(t) = t^{-2/3} S(x/t^{1/3}, y/t^{1/3}) * u0, applied in coefficient space.
RealField linear_solution_via_convolution(const RealField& u0, double t, const ConvolutionKernel& kernel);
RealField linear_solution_via_convolution(const RealField& u0, double t, const KernelTableConfig& cfg = {});

// Scalar S(x, y) through the same Airy reduction, for spot checks.
double evaluate_S_airy(double x, double y, double eta_step = 0.01);

// Raised-cosine taper used by the direct evaluator.
double raised_cosine_taper(double u, double xi_max, double width);

}  // namespace zklab
