#pragma once

#include <limits>
#include <string>
#include <vector>

#include "zklab/grid.hpp"

namespace zklab {

// a(t) = a0 / sqrt(1 + 27 a0^2 t / 2), the solution of a' + (27/4) a^3 = 0.
double decay_rate(double t, double a0);

struct ThetaValues {
  double value;
  double d1;
  double d2;
};

// Quintic bridge 1/4 + (15/8) z^3 - (12/8) z^4 + (3/8) z^5 on [0, 1].
ThetaValues theta_poly(double z);
// theta'' in the factored form (3/4) z ((sqrt(10) z - 12/sqrt(10))^2 + 3/5).
double theta_second_factored(double z);
double theta_third(double z);

struct TaylorValues {
  double value;
  double d1;
  double d2;
};

// Second-order Taylor polynomial of exp(a(t) z^{3/2}) about z = n, for z >= n.
TaylorValues p2_taylor(double z, double t, int n, double a0);

// Smooth non-increasing cutoff: 1 for s <= 1, 0 for s >= 10.
double kato_cutoff(double s);
// int_0^x kato_cutoff(x'/n) dx'
double kato_theta(double x, int n);

enum class WeightKind { ExpAbs, ExpPlus, ExpLinear, Poly, TruncatedPhiN, KatoPhiN };

const char* weight_kind_name(WeightKind k);

// All weights depend on z = x + y. Parameters not used by a kind are ignored.
struct WeightSpec {
  WeightKind kind = WeightKind::Poly;
  double a = 0.0;      // ExpAbs rate, Poly exponent
  double beta = 0.0;   // ExpLinear, KatoPhiN
  double a0 = 1.0;     // ExpPlus, TruncatedPhiN: rate at t = 0
  int n = 4;           // TruncatedPhiN, KatoPhiN

  static WeightSpec exp_abs(double a) { return {WeightKind::ExpAbs, a, 0.0, 1.0, 4}; }
  static WeightSpec exp_plus(double a0) { return {WeightKind::ExpPlus, 0.0, 0.0, a0, 4}; }
  static WeightSpec exp_linear(double beta) { return {WeightKind::ExpLinear, 0.0, beta, 1.0, 4}; }
  static WeightSpec poly(double a) { return {WeightKind::Poly, a, 0.0, 1.0, 4}; }
  static WeightSpec truncated(int n, double a0) { return {WeightKind::TruncatedPhiN, 0.0, 0.0, a0, n}; }
  static WeightSpec kato(int n, double beta) { return {WeightKind::KatoPhiN, 0.0, beta, 1.0, n}; }

  void validate() const;
};

double log_weight(const WeightSpec& spec, double x, double y, double t = 0.0);
double eval_weight(const WeightSpec& spec, double x, double y, double t = 0.0);

// Smooth cutoff applied on top of a weight. The box part vanishes within
// margin*L of the edge and reaches 1 after a further ramp*L. The diagonal
// part vanishes for x + y >= z_cap and reaches 1 at z_cap - z_ramp.
struct WeightWindow {
  double margin = 0.0;
  double ramp = 0.0;
  double z_cap = std::numeric_limits<double>::infinity();
  double z_ramp = 2.0;

  static WeightWindow none() { return {}; }
  static WeightWindow box(double margin, double ramp) { return {margin, ramp}; }
  bool active() const;
  std::string describe() const;
  void validate() const;
};

double window_value(const WeightWindow& w, const Grid2D& g, double x, double y);

// int f^2 * weight * window over the grid, accumulated in log space.
// Throws, naming the corner, if a single term would overflow.
double weighted_norm(const RealField& f, const WeightSpec& spec, double t = 0.0,
                     const WeightWindow& window = WeightWindow::none());

// Share of the weighted integral carried by the outer `cells` grid cells.
double weighted_edge_fraction(const RealField& f, const WeightSpec& spec, double t, const WeightWindow& window,
                              int cells = 2);

// Multiplies coefficients by (1 + kx^2 + ky^2)^{s/2}.
RealField apply_Js(const RealField& f, double s);

struct DominanceReport {
  double constant = 0.0;        // max of phi_n / exp(a(t) z^{3/2}) over the samples
  double closed_form = 0.0;     // max over [0, 1] of exp(a0 (theta(z) - z^{3/2}))
  double argmax_z = 0.0;
  int argmax_n = 0;
  double worst_monotonicity = 0.0;  // most negative increment seen (0 if monotone)
  double worst_seam_gap = 0.0;      // largest relative jump at z = 0, 1, n
};

DominanceReport weight_dominance(const std::vector<int>& ns, double a0, const std::vector<double>& times,
                                 int samples_per_n = 1000);

}  // namespace zklab
