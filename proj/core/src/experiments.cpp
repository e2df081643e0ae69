#include "zklab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <tuple>

#include "zklab/fft.hpp"
#include "zklab/spectral.hpp"

namespace zklab {

namespace {

RealField reflect(const RealField& f) {
  const Grid2D& g = f.grid;
  RealField out(g);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) out.at(i, j) = f.at((g.nx - i) % g.nx, (g.ny - j) % g.ny);
  return out;
}

// Least-squares line through (x, y).
std::pair<double, double> fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sx += x[k];
    sy += y[k];
    sxx += x[k] * x[k];
    sxy += x[k] * y[k];
  }
  const double den = n * sxx - sx * sx;
  if (den == 0.0) return {0.0, n > 0 ? sy / n : 0.0};
  const double slope = (n * sxy - sx * sy) / den;
  return {slope, (sy - slope * sx) / n};
}

// Trapezoid weight of a coordinate against [lo, hi] on a lattice of spacing h.
double edge_weight(double v, double lo, double hi, double h) {
  const double tol = 1e-9 * h;
  if (v < lo - tol || v > hi + tol) return 0.0;
  if (std::abs(v - lo) <= tol || std::abs(v - hi) <= tol) return 0.5;
  return 1.0;
}

// Linear symmetric flow of a product datum f(x) f(y): each factor evolves under
// the one-dimensional Airy flow on a line much longer than the box, so nothing
// wraps around within the run.
class SeparableLinearFlow {
 public:
  SeparableLinearFlow(const Grid2D& g, int pad) : g_(g), n_(g.nx * pad), L_(g.Lx * pad), offset_((n_ - g.nx) / 2) {
    if (g.nx != g.ny || g.Lx != g.Ly) throw ZklabError("separable flow: needs a square grid");
  }

  std::vector<double> sample(const std::function<double(double)>& f) const {
    std::vector<double> line(n_);
    for (int i = 0; i < n_; ++i) line[i] = f(x(i));
    return line;
  }

  std::vector<double> propagate(const std::vector<double>& line, double t) const {
    std::vector<cplx> buf(line.begin(), line.end());
    fft::forward_2d(n_, 1, buf.data(), buf.data());
    for (int i = 0; i < n_; ++i) {
      const int m = i < n_ / 2 ? i : i - n_;
      if (m == -n_ / 2) {
        buf[i] = 0.0;
        continue;
      }
      const double k = 2.0 * std::numbers::pi * m / L_;
      buf[i] *= std::polar(1.0 / n_, t * k * k * k);
    }
    fft::backward_2d(n_, 1, buf.data(), buf.data());
    std::vector<double> out(n_);
    for (int i = 0; i < n_; ++i) out[i] = buf[i].real();
    return out;
  }

  static std::vector<double> reflect(const std::vector<double>& line) {
    const int n = static_cast<int>(line.size());
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) out[i] = line[(n - i) % n];
    return out;
  }

  RealField outer(const std::vector<double>& line, double amplitude) const {
    RealField f(g_);
    for (int j = 0; j < g_.ny; ++j)
      for (int i = 0; i < g_.nx; ++i) f.at(i, j) = amplitude * line[offset_ + i] * line[offset_ + j];
    return f;
  }

 private:
  double x(int i) const { return -0.5 * L_ + i * (L_ / n_); }

  Grid2D g_;
  int n_;
  double L_;
  int offset_;
};

constexpr int kLinePad = 64;

std::vector<double> gaussian_line(const SeparableLinearFlow& flow, const GaussianDatum& d) {
  if (d.cx != d.cy) throw ZklabError("separable flow: datum must be centred on the diagonal");
  return flow.sample([&](double s) { return std::exp(-(s - d.cx) * (s - d.cx) / (d.width * d.width)); });
}

}  // namespace

double GaussianDatum::operator()(double x, double y) const {
  const double u = x - cx, v = y - cy;
  return amplitude * std::exp(-(u * u + v * v) / (width * width));
}

void GaussianDatum::validate() const {
  if (!(width > 0.0)) throw ZklabError("GaussianDatum: width must be positive");
  if (!std::isfinite(amplitude) || !std::isfinite(cx) || !std::isfinite(cy))
    throw ZklabError("GaussianDatum: parameters must be finite");
}

std::vector<double> uniform_times(double t_end, int count) {
  if (count < 2 || !(t_end > 0.0)) throw ZklabError("uniform_times: need t_end > 0 and at least 2 samples");
  std::vector<double> t(count);
  for (int k = 0; k < count; ++k) t[k] = t_end * k / (count - 1);
  return t;
}

std::vector<RealField> symmetric_samples(const RealField& u0, const std::vector<double>& times, bool nonlinear,
                                         double dt) {
  const DispersionSymbol sym = DispersionSymbol::symmetric();
  std::vector<RealField> out;
  out.reserve(times.size());
  if (!nonlinear) {
    for (double t : times) out.push_back(linear_propagate(u0, t, sym));
    return out;
  }
  if (!(dt > 0.0)) throw ZklabError("symmetric_samples: dt must be positive");
  const double limit = cfl_time_step(u0.grid, u0.max_abs(), NonlinearForm::Symmetric, 2.0 / 3.0, 0.5);
  if (dt > limit) throw ZklabError("symmetric_samples: dt exceeds the nonlinear rate bound");
  ZkStepper stepper(u0, sym, NonlinearForm::Symmetric, 2.0 / 3.0);
  for (double t : times) {
    const double gap = t - stepper.time();
    if (gap < -1e-12) throw ZklabError("symmetric_samples: times must be nondecreasing");
    if (gap > 1e-12) {
      const int steps = static_cast<int>(std::ceil(gap / dt - 1e-9));
      stepper.advance(gap, steps);
    }
    RealField s = stepper.state();
    if (!s.all_finite()) throw ZklabError("symmetric_samples: solution blew up");
    out.push_back(std::move(s));
  }
  return out;
}

void Decay15Config::validate() const {
  if (n < 16 || n % 2) throw ZklabError("decay15: n must be even and at least 16");
  if (!(L > 0.0)) throw ZklabError("decay15: L must be positive");
  if (!(a0 > 0.0)) throw ZklabError("decay15: a0 must be positive");
  if (!(t_end > 0.0)) throw ZklabError("decay15: t_end must be positive");
  if (samples < 2) throw ZklabError("decay15: samples must be at least 2");
  if (!(w_cap > 0.0)) throw ZklabError("decay15: w_cap must be positive");
  if (datum.amplitude == 0.0) throw ZklabError("decay15: zero initial datum leaves W undefined");
  datum.validate();
  window.validate();
}

Decay15Report run_decay15(const Decay15Config& cfg) {
  cfg.validate();
  const Grid2D g = Grid2D::centered(cfg.n, cfg.L);
  const RealField u0 = RealField::from_function(g, cfg.datum);
  const auto times = uniform_times(cfg.t_end, cfg.samples);
  std::vector<RealField> fields;
  if (cfg.nonlinear) {
    fields = symmetric_samples(u0, times, true, cfg.dt);
  } else {
    const SeparableLinearFlow flow(g, kLinePad);
    const auto line = gaussian_line(flow, cfg.datum);
    for (double t : times) fields.push_back(flow.outer(flow.propagate(line, t), cfg.datum.amplitude));
  }
  const WeightSpec spec = WeightSpec::exp_plus(cfg.a0);
  WeightWindow inner_window = cfg.window;
  if (std::isfinite(inner_window.z_cap)) inner_window.z_cap -= inner_window.z_ramp;

  const double base = weighted_norm(u0, spec, 0.0, cfg.window);
  const double base_inner = weighted_norm(u0, spec, 0.0, inner_window);
  Decay15Report rep;
  rep.max_adaptive = -std::numeric_limits<double>::infinity();
  rep.max_frozen = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < times.size(); ++k) {
    Decay15Point p;
    p.t = times[k];
    p.a_t = decay_rate(p.t, cfg.a0);
    p.w_adaptive = weighted_norm(fields[k], spec, p.t, cfg.window) / base;
    p.w_frozen = weighted_norm(fields[k], spec, 0.0, cfg.window) / base;
    const double inner = weighted_norm(fields[k], spec, p.t, inner_window) / base_inner;
    rep.cap_sensitivity = std::max(rep.cap_sensitivity, std::abs(inner - p.w_adaptive) / p.w_adaptive);
    rep.max_adaptive = std::max(rep.max_adaptive, p.w_adaptive);
    rep.max_frozen = std::max(rep.max_frozen, p.w_frozen);
    if (p.w_frozen > p.w_adaptive) rep.frozen_exceeds = true;
    rep.curve.push_back(p);
  }
  rep.within_cap = rep.max_adaptive <= cfg.w_cap;
  rep.a_end = rep.curve.back().a_t;
  rep.a_end_closed_form = cfg.a0 / std::sqrt(1.0 + 13.5 * cfg.a0 * cfg.a0 * cfg.t_end);
  rep.conclusive = rep.cap_sensitivity <= 1e-3;
  return rep;
}

void PersistenceConfig::validate() const {
  if (n < 16 || n % 2) throw ZklabError("persistence: n must be even and at least 16");
  if (!(L > 0.0)) throw ZklabError("persistence: L must be positive");
  if (beta < 0.0) throw ZklabError("persistence: beta must be nonnegative");
  if (ns.empty()) throw ZklabError("persistence: n list must not be empty");
  for (int v : ns)
    if (v < 1) throw ZklabError("persistence: every truncation n must be at least 1");
  if (!(t_end > 0.0)) throw ZklabError("persistence: t_end must be positive");
  if (samples < 2) throw ZklabError("persistence: samples must be at least 2");
  if (!(spread_tol > 0.0)) throw ZklabError("persistence: spread_tol must be positive");
  if (datum.amplitude == 0.0) throw ZklabError("persistence: zero initial datum");
  datum.validate();
  window.validate();
}

PersistenceReport run_persistenceB(const PersistenceConfig& cfg) {
  cfg.validate();
  const Grid2D g = Grid2D::centered(cfg.n, cfg.L);
  const RealField u0 = RealField::from_function(g, cfg.datum);
  PersistenceReport rep;
  rep.times = uniform_times(cfg.t_end, cfg.samples);
  std::vector<RealField> fields, mirrored;
  if (cfg.nonlinear) {
    fields = symmetric_samples(u0, rep.times, true, cfg.dt);
    // Reflected data at the final time, run forward again.
    mirrored = symmetric_samples(reflect(fields.back()), rep.times, true, cfg.dt);
  } else {
    const SeparableLinearFlow flow(g, kLinePad);
    const auto line = gaussian_line(flow, cfg.datum);
    const auto end = SeparableLinearFlow::reflect(flow.propagate(line, cfg.t_end));
    for (double t : rep.times) {
      fields.push_back(flow.outer(flow.propagate(line, t), cfg.datum.amplitude));
      mirrored.push_back(flow.outer(flow.propagate(end, t), cfg.datum.amplitude));
    }
  }
  const std::size_t last = rep.times.size() - 1;

  std::vector<double> c_hats;
  for (int n : cfg.ns) {
    const WeightSpec spec = cfg.beta == 0.0 ? WeightSpec::poly(0.0) : WeightSpec::kato(n, cfg.beta);
    PersistenceCurve c;
    c.n = n;
    std::vector<double> integrals;
    for (const auto& f : fields) integrals.push_back(weighted_norm(f, spec, 0.0, cfg.window));
    std::vector<double> mirror_integrals;
    for (const auto& f : mirrored) mirror_integrals.push_back(weighted_norm(reflect(f), spec, 0.0, cfg.window));
    c.c_hat = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < rep.times.size(); ++k) {
      c.growth.push_back(integrals[k] / integrals[0]);
      c.mirror_growth.push_back(mirror_integrals[k] / mirror_integrals[0]);
      if (k > 0) c.c_hat = std::max(c.c_hat, std::log(c.growth[k]) / rep.times[k]);
      const double expected = integrals[last - k] / integrals[last];
      c.mirror_gap = std::max(c.mirror_gap, std::abs(c.mirror_growth[k] - expected) / expected);
    }
    if (!std::isfinite(c.c_hat)) rep.finite = false;
    c_hats.push_back(c.c_hat);
    rep.curves.push_back(std::move(c));
  }
  const auto [lo, hi] = std::minmax_element(c_hats.begin(), c_hats.end());
  const double scale = std::max(std::abs(*lo), std::abs(*hi));
  rep.spread = scale > 1e-8 ? (*hi - *lo) / scale : 0.0;
  rep.stable = rep.finite && rep.spread <= cfg.spread_tol;
  return rep;
}

bool in_annulus_region(double R, double x, double y) {
  const double p = std::abs(x + y), q = std::abs(x - y);
  return p >= R - 1.0 && p <= R && q >= R - 1.0 && q <= R;
}

void AnnulusConfig::validate() const {
  if (n < 16 || n % 2) throw ZklabError("annulus: n must be even and at least 16");
  if (!(L > 0.0)) throw ZklabError("annulus: L must be positive");
  if (!(dt > 0.0)) throw ZklabError("annulus: dt must be positive");
  if (!(snapshot_interval > 0.0) || !(t_end > 0.0)) throw ZklabError("annulus: snapshot_interval and t_end must be positive");
  const double count = t_end / snapshot_interval;
  if (std::abs(count - std::round(count)) > 1e-9) throw ZklabError("annulus: t_end must be a multiple of snapshot_interval");
  if (radii.empty()) throw ZklabError("annulus: radius ladder must not be empty");
  for (double R : radii)
    if (!(R >= 1.0)) throw ZklabError("annulus: radii must be at least 1");
  if (quadrature_n % n != 0 || (refine && quadrature_n % (2 * n) != 0))
    throw ZklabError("annulus: quadrature_n must be a multiple of n (and of 2n when refining)");
  // Diamond edges must fall on lattice diagonals.
  const double h = L / quadrature_n;
  const double cells = 1.0 / h;
  if (std::abs(cells - std::round(cells)) > 1e-9 || std::abs(0.5 * L / h - std::round(0.5 * L / h)) > 1e-9)
    throw ZklabError("annulus: the quadrature spacing must divide 1 and L/2");
  first.validate();
  second.validate();
}

std::vector<double> annulus_norms(const std::vector<double>& times, const std::vector<RealField>& v,
                                  const std::vector<double>& radii, int quadrature_n) {
  if (times.size() != v.size() || times.size() < 2) throw ZklabError("annulus_norms: need matching snapshots");
  const Grid2D& g = v.front().grid;
  if (quadrature_n % g.nx != 0 || g.nx != g.ny) throw ZklabError("annulus_norms: quadrature lattice must refine a square grid");
  const int factor = quadrature_n / g.nx;
  const Grid2D fine = g.refined(factor);
  const double h = fine.dx();
  const double Rmax = *std::max_element(radii.begin(), radii.end());
  // Index window that holds every diamond.
  const int lo = std::max(0, static_cast<int>(std::floor((-Rmax - 1.0 - fine.x0) / h)));
  const int hi = std::min(fine.nx - 1, static_cast<int>(std::ceil((Rmax + 1.0 - fine.x0) / h)));

  std::vector<std::vector<double>> per_time(times.size(), std::vector<double>(radii.size(), 0.0));
  for (std::size_t s = 0; s < v.size(); ++s) {
    const SpectralField c = forward_transform(v[s]);
    const RealField f0 = upsample(c, factor);
    const RealField fx = upsample(spectral_derivative(c, 1, 0), factor);
    const RealField fy = upsample(spectral_derivative(c, 0, 1), factor);
    SpectralField lap = spectral_derivative(c, 2, 0);
    const SpectralField lyy = spectral_derivative(c, 0, 2);
    for (std::size_t m = 0; m < lap.coeffs.size(); ++m) lap.coeffs[m] += lyy.coeffs[m];
    const RealField fl = upsample(lap, factor);
    for (int j = lo; j <= hi; ++j) {
      const double y = fine.y(j);
      for (int i = lo; i <= hi; ++i) {
        const double x = fine.x(i);
        const double p = std::abs(x + y), q = std::abs(x - y);
        const std::size_t idx = fine.index(i, j);
        const double e = f0.values[idx] * f0.values[idx] + fx.values[idx] * fx.values[idx] +
                         fy.values[idx] * fy.values[idx] + fl.values[idx] * fl.values[idx];
        for (std::size_t r = 0; r < radii.size(); ++r) {
          const double R = radii[r];
          const double w = edge_weight(p, R - 1.0, R, h) * edge_weight(q, R - 1.0, R, h);
          if (w > 0.0) per_time[s][r] += w * e;
        }
      }
    }
  }
  std::vector<double> out(radii.size(), 0.0);
  for (std::size_t r = 0; r < radii.size(); ++r) {
    double acc = 0.0;
    for (std::size_t s = 0; s + 1 < times.size(); ++s)
      acc += 0.5 * (times[s + 1] - times[s]) * (per_time[s][r] + per_time[s + 1][r]);
    out[r] = std::sqrt(acc * h * h);
  }
  return out;
}

namespace {

struct AnnulusRun {
  std::vector<double> norms;
  double total = 0.0;  // space-time L2 norm of v over the box
};

AnnulusRun annulus_run(const AnnulusConfig& cfg, int n) {
  const Grid2D g = Grid2D::centered(n, cfg.L);
  const auto times = uniform_times(cfg.t_end, static_cast<int>(std::lround(cfg.t_end / cfg.snapshot_interval)) + 1);
  const auto s1 = symmetric_samples(RealField::from_function(g, cfg.first), times, true, cfg.dt);
  const auto s2 = symmetric_samples(RealField::from_function(g, cfg.second), times, true, cfg.dt);
  std::vector<RealField> v;
  for (std::size_t k = 0; k < times.size(); ++k) v.push_back(s1[k] - s2[k]);
  AnnulusRun run;
  run.norms = annulus_norms(times, v, cfg.radii, cfg.quadrature_n);
  double acc = 0.0;
  for (std::size_t k = 0; k + 1 < times.size(); ++k)
    acc += 0.5 * (times[k + 1] - times[k]) * (inner(v[k], v[k]) + inner(v[k + 1], v[k + 1]));
  run.total = std::sqrt(acc);
  return run;
}

}  // namespace

AnnulusReport run_annulus_trend(const AnnulusConfig& cfg) {
  cfg.validate();
  AnnulusReport rep;
  rep.identical_data = cfg.first.amplitude == cfg.second.amplitude && cfg.first.width == cfg.second.width &&
                       cfg.first.cx == cfg.second.cx && cfg.first.cy == cfg.second.cy;
  const AnnulusRun base = annulus_run(cfg, cfg.n);
  AnnulusRun fine;
  if (cfg.refine) fine = annulus_run(cfg, 2 * cfg.n);

  std::vector<double> xs, ys;
  rep.all_positive = true;
  for (std::size_t r = 0; r < cfg.radii.size(); ++r) {
    AnnulusRow row;
    row.R = cfg.radii[r];
    row.norm = base.norms[r];
    row.r32 = std::pow(row.R, 1.5);
    row.log_norm = row.norm > 0.0 ? std::log(row.norm) : -std::numeric_limits<double>::infinity();
    const bool inside = row.R <= 0.5 * cfg.L - cfg.edge_margin;
    const bool above_floor = row.norm > cfg.noise_floor * base.total;
    row.trusted = inside && above_floor;
    if (cfg.refine && fine.norms[r] > 0.0 && row.norm > 0.0) {
      row.refined_log_norm = std::log(fine.norms[r]);
      row.refinement_change = std::abs(row.refined_log_norm - row.log_norm);
    }
    if (row.trusted) {
      ++rep.trusted_count;
      xs.push_back(row.r32);
      ys.push_back(row.log_norm);
      rep.max_refinement_change = std::max(rep.max_refinement_change, row.refinement_change);
    }
    if (inside && !(row.norm > 0.0)) rep.all_positive = false;
    rep.rows.push_back(row);
  }
  if (xs.size() >= 2) std::tie(rep.slope, rep.intercept) = fit_line(xs, ys);
  // Past the peak of the trusted ladder the norms should not increase.
  rep.nonincreasing_tail = true;
  if (!xs.empty()) {
    const auto peak = std::max_element(ys.begin(), ys.end()) - ys.begin();
    for (std::size_t k = peak + 1; k < ys.size(); ++k)
      if (ys[k] > ys[k - 1]) rep.nonincreasing_tail = false;
  }
  return rep;
}

}  // namespace zklab
