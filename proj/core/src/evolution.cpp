#include "zklab/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "zklab/fft.hpp"
#include "zklab/spectral.hpp"

namespace zklab {

namespace {

double coupling(NonlinearForm form) {
  switch (form) {
    case NonlinearForm::Asymmetric: return 1.0;
    case NonlinearForm::Symmetric: return symmetric_coupling();
    case NonlinearForm::Off: return 0.0;
  }
  return 0.0;
}

// Wavenumber combination multiplying the flux in the nonlinear term.
double flux_wavenumber(NonlinearForm form, double kx, double ky) {
  return form == NonlinearForm::Symmetric ? kx + ky : kx;
}

SpectralField propagate_coefficients(const SpectralField& c0, double t, const DispersionSymbol& sym) {
  SpectralField out(c0.grid);
  const Grid2D& g = c0.grid;
  for (int j = 0; j < g.ny; ++j) {
    const double ky = g.ky(j);
    for (int i = 0; i < g.nx; ++i) out.at(i, j) = c0.at(i, j) * std::polar(1.0, t * sym(g.kx(i), ky));
  }
  return out;
}

double l2_of(const SpectralField& c) { return std::sqrt(coefficient_energy(c)); }

double mass_of(const SpectralField& c) { return c.grid.Lx * c.grid.Ly * c.coeffs[0].real(); }

void record(Trajectory& tr, const ZkStepper& st) {
  tr.times.push_back(st.time());
  tr.snapshots.push_back(st.state());
}

}  // namespace

double symmetric_coupling() { return std::pow(4.0, -1.0 / 3.0); }

double DispersionSymbol::operator()(double kx, double ky) const {
  if (variant == Variant::Asymmetric) return kx * kx * kx + kx * ky * ky;
  return kx * kx * kx + ky * ky * ky;
}

const char* DispersionSymbol::name() const {
  return variant == Variant::Asymmetric ? "asymmetric" : "symmetric";
}

NonlinearForm matching_form(const DispersionSymbol& sym) {
  return sym.variant == DispersionSymbol::Variant::Asymmetric ? NonlinearForm::Asymmetric : NonlinearForm::Symmetric;
}

void SolverConfig::validate() const {
  if (!(dt > 0.0)) throw ZklabError("solver: dt must be positive");
  if (!(t_end > 0.0) || t_end > 1.0) throw ZklabError("solver: t_end must lie in (0, 1]");
  if (!(dealias_fraction > 0.0) || dealias_fraction > 1.0) throw ZklabError("solver: dealias_fraction must lie in (0, 1]");
  if (!(cfl_safety > 0.0) || cfl_safety > 1.0) throw ZklabError("solver: cfl_safety must lie in (0, 1]");
  if (snapshot_interval < 0.0) throw ZklabError("solver: snapshot_interval must be >= 0");
  if (!(blowup_factor > 1.0)) throw ZklabError("solver: blowup_factor must exceed 1");
}

RealField linear_propagate(const RealField& u0, double t, const DispersionSymbol& sym) {
  return inverse_transform(propagate_coefficients(forward_transform(u0), t, sym));
}

SpectralField linear_propagate(const SpectralField& c0, double t, const DispersionSymbol& sym) {
  return propagate_coefficients(c0, t, sym);
}

double cfl_time_step(const Grid2D& g, double max_abs_u, NonlinearForm form, double dealias_fraction,
                     double cfl_safety) {
  const double kx = dealias_fraction * (g.nx / 2) * 2.0 * std::numbers::pi / g.Lx;
  const double ky = dealias_fraction * (g.ny / 2) * 2.0 * std::numbers::pi / g.Ly;
  const double rate = coupling(form) * max_abs_u * (form == NonlinearForm::Symmetric ? kx + ky : kx);
  if (rate <= 0.0) return std::numeric_limits<double>::infinity();
  return cfl_safety / rate;
}

ZkStepper::ZkStepper(const RealField& u0, const DispersionSymbol& sym, NonlinearForm form, double dealias_fraction)
    : sym_(sym), form_(form), fraction_(dealias_fraction), c_(forward_transform(u0)) {
  if (!(fraction_ > 0.0) || fraction_ > 1.0) throw ZklabError("ZkStepper: dealias fraction must lie in (0, 1]");
}

RealField ZkStepper::state() const { return inverse_transform(c_); }

SpectralField ZkStepper::nonlinear_term(const SpectralField& c) const {
  const Grid2D& g = c.grid;
  SpectralField out(g);
  if (form_ == NonlinearForm::Off) return out;
  SpectralField p = dealias(c, fraction_);
  std::vector<cplx> u(g.size());
  fft::backward_2d(g.nx, g.ny, p.coeffs.data(), u.data());
  for (auto& v : u) v = cplx(0.5 * v.real() * v.real(), 0.0);
  fft::forward_2d(g.nx, g.ny, u.data(), out.coeffs.data());
  const double scale = coupling(form_) / static_cast<double>(g.size());
  for (int j = 0; j < g.ny; ++j) {
    const double ky = g.ky(j);
    for (int i = 0; i < g.nx; ++i) {
      // -c * (i k) * (u^2/2)^
      out.at(i, j) *= cplx(0.0, -scale * flux_wavenumber(form_, g.kx(i), ky));
    }
  }
  dealias_in_place(out, fraction_);
  return out;
}

const std::vector<cplx>& ZkStepper::half_step_factor(double h) {
  if (h != cached_h_) {
    const Grid2D& g = c_.grid;
    e_half_.resize(g.size());
    e_full_.resize(g.size());
    for (int j = 0; j < g.ny; ++j) {
      const double ky = g.ky(j);
      for (int i = 0; i < g.nx; ++i) {
        const double m = sym_(g.kx(i), ky);
        e_half_[g.index(i, j)] = std::polar(1.0, 0.5 * h * m);
        e_full_[g.index(i, j)] = std::polar(1.0, h * m);
      }
    }
    cached_h_ = h;
  }
  return e_half_;
}

void ZkStepper::step(double h) {
  const auto& E = half_step_factor(h);
  const auto& E2 = e_full_;
  const std::size_t n = c_.coeffs.size();
  auto& v = c_.coeffs;
  if (form_ == NonlinearForm::Off) {
    for (std::size_t k = 0; k < n; ++k) v[k] *= E2[k];
    t_ += h;
    return;
  }
  SpectralField tmp(c_.grid);
  SpectralField a = nonlinear_term(c_);
  for (std::size_t k = 0; k < n; ++k) {
    a.coeffs[k] *= h;
    tmp.coeffs[k] = E[k] * (v[k] + 0.5 * a.coeffs[k]);
  }
  SpectralField b = nonlinear_term(tmp);
  for (std::size_t k = 0; k < n; ++k) {
    b.coeffs[k] *= h;
    tmp.coeffs[k] = E[k] * v[k] + 0.5 * b.coeffs[k];
  }
  SpectralField c = nonlinear_term(tmp);
  for (std::size_t k = 0; k < n; ++k) {
    c.coeffs[k] *= h;
    tmp.coeffs[k] = E2[k] * v[k] + E[k] * c.coeffs[k];
  }
  SpectralField d = nonlinear_term(tmp);
  for (std::size_t k = 0; k < n; ++k) {
    v[k] = E2[k] * v[k] +
           (E2[k] * a.coeffs[k] + 2.0 * E[k] * (b.coeffs[k] + c.coeffs[k]) + h * d.coeffs[k]) / 6.0;
  }
  t_ += h;
}

void ZkStepper::advance(double duration, int steps) {
  if (steps <= 0) throw ZklabError("ZkStepper::advance: steps must be positive");
  const double h = duration / steps;
  for (int s = 0; s < steps; ++s) step(h);
}

Trajectory zk_solve(const RealField& u0, const SolverConfig& cfg, const DispersionSymbol& sym) {
  cfg.validate();
  const int n_steps = std::max(1, static_cast<int>(std::ceil(cfg.t_end / cfg.dt - 1e-9)));
  const double h = cfg.t_end / n_steps;
  const double h_max = cfl_time_step(u0.grid, u0.max_abs(), cfg.nonlinear_form, cfg.dealias_fraction, cfg.cfl_safety);
  if (h > h_max) {
    throw ZklabError("zk_solve: dt " + std::to_string(h) + " exceeds the nonlinear rate bound " + std::to_string(h_max));
  }
  int stride = n_steps;
  if (cfg.snapshot_interval > 0.0) stride = std::max(1, static_cast<int>(std::lround(cfg.snapshot_interval / h)));

  ZkStepper st(u0, sym, cfg.nonlinear_form, cfg.dealias_fraction);
  Trajectory tr;
  const double l2_0 = l2_of(st.coefficients());
  tr.diagnostics.push_back({0.0, mass_of(st.coefficients()), l2_0});
  record(tr, st);
  for (int s = 1; s <= n_steps; ++s) {
    st.step(h);
    const double l2 = l2_of(st.coefficients());
    if (!std::isfinite(l2) || (l2_0 > 0.0 && l2 > cfg.blowup_factor * l2_0)) {
      tr.aborted = true;
      tr.abort_reason = "norm growth beyond blow-up threshold at t = " + std::to_string(st.time());
      break;
    }
    const double t = s * h;
    tr.diagnostics.push_back({t, mass_of(st.coefficients()), l2});
    tr.last_valid_time = t;
    if (s % stride == 0 || s == n_steps) record(tr, st);
  }
  return tr;
}

DifferenceCoefficients difference_coefficients(const RealField& u1, const RealField& u2) {
  require_same_grid(u1.grid, u2.grid, "difference_coefficients");
  const double c = symmetric_coupling();
  const SpectralField s2 = forward_transform(u2);
  SpectralField grad = spectral_derivative(s2, 1, 0);
  const SpectralField gy = spectral_derivative(s2, 0, 1);
  for (std::size_t k = 0; k < grad.coeffs.size(); ++k) grad.coeffs[k] += gy.coeffs[k];
  return {c * inverse_transform(grad), c * u1};
}

DifferenceResidual difference_residual(const RealField& u1_0, const RealField& u2_0, double t, double dt,
                                       double delta, double dealias_fraction) {
  require_same_grid(u1_0.grid, u2_0.grid, "difference_residual");
  if (!(delta > 0.0) || !(t > 2.0 * delta) || !(dt > 0.0)) throw ZklabError("difference_residual: need t > 2 delta > 0");
  const auto sym = DispersionSymbol::symmetric();
  ZkStepper s1(u1_0, sym, NonlinearForm::Symmetric, dealias_fraction);
  ZkStepper s2(u2_0, sym, NonlinearForm::Symmetric, dealias_fraction);
  const double t0 = t - 2.0 * delta;
  const int n0 = std::max(1, static_cast<int>(std::ceil(t0 / dt - 1e-9)));
  s1.advance(t0, n0);
  s2.advance(t0, n0);

  std::vector<SpectralField> v;  // v at t - 2 delta, ..., t + 2 delta
  SpectralField u1_mid, u2_mid;
  for (int k = 0; k < 5; ++k) {
    if (k > 0) {
      s1.step(delta);
      s2.step(delta);
    }
    SpectralField d = s1.coefficients();
    for (std::size_t n = 0; n < d.coeffs.size(); ++n) d.coeffs[n] -= s2.coefficients().coeffs[n];
    v.push_back(std::move(d));
    if (k == 2) {
      u1_mid = s1.coefficients();
      u2_mid = s2.coefficients();
    }
  }
  const Grid2D& g = u1_0.grid;
  const SpectralField& vm = v[2];
  SpectralField vt(g), lin(g), dv(g);
  for (int j = 0; j < g.ny; ++j) {
    const double ky = g.ky(j);
    for (int i = 0; i < g.nx; ++i) {
      const std::size_t n = g.index(i, j);
      const double kx = g.kx(i);
      vt.coeffs[n] = (-v[4].coeffs[n] + 8.0 * v[3].coeffs[n] - 8.0 * v[1].coeffs[n] + v[0].coeffs[n]) / (12.0 * delta);
      // (d_x^3 + d_y^3) -> -i (kx^3 + ky^3)
      lin.coeffs[n] = cplx(0.0, -sym(kx, ky)) * vm.coeffs[n];
      dv.coeffs[n] = cplx(0.0, kx + ky) * vm.coeffs[n];
    }
  }
  const auto coef = difference_coefficients(inverse_transform(u1_mid), inverse_transform(u2_mid));
  const RealField vx = inverse_transform(vm);
  const RealField dvx = inverse_transform(dv);
  RealField lower(g);
  for (std::size_t n = 0; n < lower.values.size(); ++n) {
    lower.values[n] = coef.a1.values[n] * dvx.values[n] + coef.a0.values[n] * vx.values[n];
  }
  const SpectralField lower_c = forward_transform(lower);
  SpectralField res(g);
  SpectralField tail_c = lower_c;
  const SpectralField kept = dealias(lower_c, dealias_fraction);
  for (std::size_t n = 0; n < res.coeffs.size(); ++n) {
    res.coeffs[n] = vt.coeffs[n] + lin.coeffs[n] + lower_c.coeffs[n];
    tail_c.coeffs[n] -= kept.coeffs[n];
  }
  DifferenceResidual out;
  out.residual = l2_of(res);
  out.tail = l2_of(tail_c);
  out.v_norm = l2_of(vm);
  out.dt_term = l2_of(vt);
  return out;
}

}  // namespace zklab
