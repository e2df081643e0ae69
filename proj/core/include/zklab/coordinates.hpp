#pragma once

#include <functional>
#include <utility>

#include "zklab/evolution.hpp"
#include "zklab/grid.hpp"

namespace zklab {

// Rotation and scaling taking the asymmetric equation to the symmetric one:
// x' = mu x + lambda y, y' = mu x - lambda y.
struct CoordinateMap {
  double mu;
  double lambda;

  CoordinateMap();

  std::pair<double, double> to_symmetric(double x, double y) const;
  std::pair<double, double> to_original(double xs, double ys) const;
  // dx dy = jacobian() dx' dy'
  double jacobian() const { return 1.0 / (2.0 * lambda * mu); }
};

// Rate a~ with e^{a|x|^{3/2}} = e^{a~|x'+y'|^{3/2}} under the map.
double transport_weight_rate(double a);

struct NormIdentityReport {
  double original = 0.0;    // int f^2 e^{a|x|^{3/2}} dx dy
  double symmetric = 0.0;   // jacobian * int f~^2 e^{a~|x'+y'|^{3/2}} dx' dy'
  double rel_error = 0.0;
};

// Both integrals by Gauss-Legendre panels on [-half_width, half_width]^2 in
// their own frame, with panel breaks on the kink of the weight.
NormIdentityReport check_norm_identity(const std::function<double(double, double)>& f, double a, double half_width,
                                       int panels = 64, int order = 16);

struct EquivalenceConfig {
  int n = 256;                 // points per side in each frame
  double L_original = 64.0;
  double L_symmetric = 96.0;
  double dt = 5e-3;
  double t_end = 1.0;
  double sample_threshold = 1e-3;  // relative to max |u~| at t_end
};

struct EquivalenceReport {
  double rel_l2_sampled = 0.0;   // pointwise comparison at mapped coordinates
  double norm_original = 0.0;    // ||u(t_end)||^2 in the original frame
  double norm_symmetric = 0.0;   // jacobian * ||u~(t_end)||^2
  double rel_norm_gap = 0.0;
  int samples = 0;
};

// Evolves u0 with the asymmetric solver and u0 composed with the map with the
// symmetric solver, then compares the two at t_end.
EquivalenceReport solve_equivalence_check(const std::function<double(double, double)>& u0,
                                          const EquivalenceConfig& cfg);

}  // namespace zklab
