#pragma once

#include <string>
#include <utility>
#include <vector>

#include "zklab/grid.hpp"

namespace zklab {

// 4^{-1/3}, the nonlinear coefficient of the symmetric form.
double symmetric_coupling();

// u_t = i m(kx, ky) u in coefficient space.
struct DispersionSymbol {
  enum class Variant { Asymmetric, Symmetric };
  Variant variant = Variant::Asymmetric;

  static DispersionSymbol asymmetric() { return {Variant::Asymmetric}; }
  static DispersionSymbol symmetric() { return {Variant::Symmetric}; }

  // kx^3 + kx ky^2 or kx^3 + ky^3
  double operator()(double kx, double ky) const;
  const char* name() const;
};

enum class NonlinearForm {
  Asymmetric,  // d_x(u^2/2)
  Symmetric,   // 4^{-1/3} (d_x + d_y)(u^2/2)
  Off,
};

NonlinearForm matching_form(const DispersionSymbol& sym);

struct SolverConfig {
  double dt = 1e-3;
  double t_end = 1.0;
  double dealias_fraction = 2.0 / 3.0;
  NonlinearForm nonlinear_form = NonlinearForm::Asymmetric;
  double cfl_safety = 0.5;          // bound on dt * nonlinear rate
  double snapshot_interval = 0.0;   // 0 keeps only the first and last state
  double blowup_factor = 1e3;

  void validate() const;
};

struct StepDiagnostics {
  double t = 0.0;
  double mass = 0.0;
  double l2 = 0.0;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<RealField> snapshots;
  std::vector<StepDiagnostics> diagnostics;  // one per step, plus t = 0
  bool aborted = false;
  double last_valid_time = 0.0;
  std::string abort_reason;

  const RealField& final_state() const { return snapshots.back(); }
};

// Exact linear flow.
RealField linear_propagate(const RealField& u0, double t, const DispersionSymbol& sym);
SpectralField linear_propagate(const SpectralField& c0, double t, const DispersionSymbol& sym);

// Largest dt allowed by the nonlinear rate bound for a field of this size.
double cfl_time_step(const Grid2D& g, double max_abs_u, NonlinearForm form, double dealias_fraction,
                     double cfl_safety);

// Integrating-factor RK4 on coefficients. Holds the current state and time.
class ZkStepper {
 public:
  ZkStepper(const RealField& u0, const DispersionSymbol& sym, NonlinearForm form, double dealias_fraction);

  void step(double h);
  void advance(double duration, int steps);

  double time() const { return t_; }
  const SpectralField& coefficients() const { return c_; }
  RealField state() const;

  // Dealiased right-hand side of the nonlinear part, u_t = i m u + N(u).
  SpectralField nonlinear_term(const SpectralField& c) const;

 private:
  const std::vector<cplx>& half_step_factor(double h);

  DispersionSymbol sym_;
  NonlinearForm form_;
  double fraction_;
  double t_ = 0.0;
  SpectralField c_;
  double cached_h_ = -1.0;
  std::vector<cplx> e_half_;
  std::vector<cplx> e_full_;
};

// Integrates from t = 0 to cfg.t_end with a uniform step no larger than cfg.dt.
// Throws if cfg.dt violates the rate bound for u0. Blow-up stops the run and is
// reported through Trajectory::aborted.
Trajectory zk_solve(const RealField& u0, const SolverConfig& cfg, const DispersionSymbol& sym);

// Coefficients of v_t + (d_x^3 + d_y^3) v + a1 (d_x + d_y) v + a0 v = 0 for
// v = u1 - u2 with u1, u2 solving the symmetric equation.
struct DifferenceCoefficients {
  RealField a0;  // 4^{-1/3} (d_x + d_y) u2
  RealField a1;  // 4^{-1/3} u1
};

DifferenceCoefficients difference_coefficients(const RealField& u1, const RealField& u2);

struct DifferenceResidual {
  double residual = 0.0;       // L2 norm of the residual
  double tail = 0.0;           // part of the coefficient terms the projected solver cannot see
  double v_norm = 0.0;
  double dt_term = 0.0;        // L2 norm of the time derivative
};

// Residual of the difference equation at time t, with v_t from a fourth-order
// central difference of width delta computed by extra solver steps.
DifferenceResidual difference_residual(const RealField& u1_0, const RealField& u2_0, double t, double dt,
                                       double delta, double dealias_fraction = 2.0 / 3.0);

}  // namespace zklab
