#include "zklab/carleman.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <random>
#include <vector>

#include "zklab/grid.hpp"
#include "zklab/quadrature.hpp"
#include "zklab/spectral.hpp"

namespace zklab {

namespace {

const double kPlateau = 2.0 * std::numbers::sqrt2;

struct Quintic {
  double v, d1, d2;
};

Quintic quintic(double u) {
  if (u <= 0.0) return {0.0, 0.0, 0.0};
  if (u >= 1.0) return {1.0, 0.0, 0.0};
  const double u2 = u * u;
  return {u2 * u * (10.0 - 15.0 * u + 6.0 * u2), 30.0 * u2 * (1.0 - u) * (1.0 - u),
          60.0 * u - 180.0 * u2 + 120.0 * u2 * u};
}

struct Node3 {
  std::vector<double> x, wx, y, wy, t, wt;
};

Node3 box_rule(double x0, double x1, double y0, double y1, double t0, double t1, int order) {
  Node3 r;
  gauss_on_interval(order, x0, x1, r.x, r.wx);
  gauss_on_interval(order, y0, y1, r.y, r.wy);
  gauss_on_interval(order, t0, t1, r.t, r.wt);
  return r;
}

std::vector<BumpDerivs> bump_samples(const std::vector<double>& u, double c, double h) {
  std::vector<BumpDerivs> out(u.size());
  for (std::size_t k = 0; k < u.size(); ++k) out[k] = bump(u[k], c, h);
  return out;
}

// Values of g and the derivatives the operators need.
struct GLocal {
  double g, gx, gxx, gxxx, gy, gyy, gyyy, gt;
};

GLocal combine(double amp, const BumpDerivs& bx, const BumpDerivs& by, const BumpDerivs& bt) {
  const double yt = amp * by.v * bt.v;
  const double xt = amp * bx.v * bt.v;
  return {amp * bx.v * by.v * bt.v, bx.d1 * yt, bx.d2 * yt, bx.d3 * yt,
          by.d1 * xt, by.d2 * xt, by.d3 * xt, amp * bx.v * by.v * bt.d1};
}

struct FLocal {
  double f, fx, fxx, fxxx, fy, fyy, fyyy, ft;
};

// Derivatives of f = E g with E = exp(alpha phi - shift).
FLocal conjugate_up(const GLocal& g, double E, double alpha, double px, double py, double pxx, double pyy,
                    double pt) {
  const double ax = alpha * px, ay = alpha * py;
  const double qx = alpha * pxx + ax * ax, qy = alpha * pyy + ay * ay;
  const double cx = 3.0 * ax * alpha * pxx + ax * ax * ax;
  const double cy = 3.0 * ay * alpha * pyy + ay * ay * ay;
  return {E * g.g,
          E * (ax * g.g + g.gx),
          E * (qx * g.g + 2.0 * ax * g.gx + g.gxx),
          E * (cx * g.g + 3.0 * qx * g.gx + 3.0 * ax * g.gxx + g.gxxx),
          E * (ay * g.g + g.gy),
          E * (qy * g.g + 2.0 * ay * g.gy + g.gyy),
          E * (cy * g.g + 3.0 * qy * g.gy + 3.0 * ay * g.gyy + g.gyyy),
          E * (alpha * pt * g.g + g.gt)};
}

struct AS {
  double a, s;
};

AS split_terms(const FLocal& f, double alpha, double px, double py, double pxx, double pyy, double pt) {
  const double a2 = alpha * alpha, a3 = a2 * alpha;
  const double A = f.ft + f.fxxx + f.fyyy + 3.0 * a2 * px * px * f.fx + 3.0 * a2 * py * py * f.fy +
                   3.0 * a2 * px * pxx * f.f + 3.0 * a2 * py * pyy * f.f;
  // Third derivatives of phi vanish.
  const double S = -3.0 * alpha * (pxx * f.fx + px * f.fxx) - 3.0 * alpha * (pyy * f.fy + py * f.fyy) -
                   a3 * px * px * px * f.f - a3 * py * py * py * f.f - alpha * pt * f.f;
  return {A, S};
}

double max_alpha_phi(const Node3& q, double alpha, const CarlemanWeight& w) {
  double m = -std::numeric_limits<double>::infinity();
  for (double t : q.t)
    for (double y : q.y)
      for (double x : q.x) m = std::max(m, alpha * w.value(x, y, t));
  return m;
}

struct NormSums {
  double phi = 0.0, phi2 = 0.0, grad = 0.0, rhs = 0.0, lin = 0.0, pert = 0.0;
  double shift = 0.0;
};

NormSums carleman_sums(const TestFunctionG& g, double alpha, const CarlemanWeight& w,
                       const LowerOrderCoefficients* coeffs, int order) {
  const Node3 q = box_rule(g.cx - g.hx, g.cx + g.hx, g.cy - g.hy, g.cy + g.hy, g.t0, g.t1, order);
  const auto bx = bump_samples(q.x, g.cx, g.hx);
  const auto by = bump_samples(q.y, g.cy, g.hy);
  const auto bt = bump_samples(q.t, g.tc(), g.ht());
  NormSums s;
  s.shift = max_alpha_phi(q, alpha, w);
  for (std::size_t k = 0; k < q.t.size(); ++k) {
    const double t = q.t[k];
    for (std::size_t j = 0; j < q.y.size(); ++j) {
      const double y = q.y[j];
      for (std::size_t i = 0; i < q.x.size(); ++i) {
        const double x = q.x[i];
        const double wq = q.wx[i] * q.wy[j] * q.wt[k];
        const GLocal d = combine(g.amplitude, bx[i], by[j], bt[k]);
        const double phi = w.value(x, y, t);
        const double E2 = std::exp(2.0 * (alpha * phi - s.shift));
        const double lg = d.gt + d.gxxx + d.gyyy;
        double p = 0.0;
        if (coeffs) {
          const double a1 = coeffs->a1 ? coeffs->a1(x, y, t) : 0.0;
          const double a0 = coeffs->a0 ? coeffs->a0(x, y, t) : 0.0;
          p = a1 * (d.gx + d.gy) + a0 * d.g;
        }
        const double full = lg + p;
        s.phi += wq * E2 * phi * phi * d.g * d.g;
        s.phi2 += wq * E2 * phi * phi * phi * phi * d.g * d.g;
        s.grad += wq * E2 * (d.gx * d.gx + d.gy * d.gy);
        s.rhs += wq * E2 * full * full;
        s.lin += wq * E2 * lg * lg;
        s.pert += wq * E2 * p * p;
      }
    }
  }
  return s;
}

CarlemanReport carleman_check(const TestFunctionG& g, double R, double alpha, const TimeProfile& profile,
                              const LowerOrderCoefficients* coeffs, int order) {
  if (!(R > 0.0) || !(alpha > 0.0)) throw ZklabError("carleman check: R and alpha must be positive");
  if (order < 4) throw ZklabError("carleman check: quadrature order must be at least 4");
  if (!(g.hx > 0.0) || !(g.hy > 0.0) || !(g.t1 > g.t0)) throw ZklabError("carleman check: empty support");
  CarlemanWeight w{R, profile};
  CarlemanReport rep;
  rep.R = R;
  rep.alpha = alpha;
  if (g.is_zero()) {
    rep.vacuous = true;
    return rep;
  }
  auto evaluate = [&](int n, CarlemanReport& r) {
    const NormSums s = carleman_sums(g, alpha, w, coeffs, n);
    r.log_shift = s.shift;
    r.lhs_term1 = std::pow(alpha, 2.5) / (R * R * R) * std::sqrt(s.phi);
    r.lhs_term1_phi2 = std::pow(alpha, 2.5) / (R * R * R) * std::sqrt(s.phi2);
    r.lhs_term2 = std::pow(alpha, 1.5) / (R * R) * std::sqrt(s.grad);
    r.rhs = std::sqrt(s.rhs);
    r.perturbation = s.lin > 0.0 ? std::sqrt(s.pert / s.lin) : 0.0;
    if (r.rhs > 0.0) {
      r.ratio = (r.lhs_term1 + r.lhs_term2) / r.rhs;
      r.ratio_phi2 = (r.lhs_term1_phi2 + r.lhs_term2) / r.rhs;
    } else {
      r.vacuous = true;
    }
  };
  evaluate(order, rep);
  CarlemanReport fine = rep;
  evaluate(2 * order, fine);
  if (!rep.vacuous && fine.ratio > 0.0) rep.eps_disc = std::abs(fine.ratio - rep.ratio) / fine.ratio;
  return rep;
}

}  // namespace

TimeProfile TimeProfile::smoothstep(double r) {
  if (!(r > 0.0) || r > 0.5) throw ZklabError("TimeProfile: ramp parameter must lie in (0, 1/2]");
  return TimeProfile(r, false, kPlateau);
}

TimeProfile TimeProfile::constant(double value) { return TimeProfile(0.0, true, value); }

double TimeProfile::value(double t) const {
  if (constant_) return level_;
  const double h = 0.5 * r_;
  if (t < 0.5) return level_ * quintic((t - h) / h).v;
  return level_ * quintic((1.0 - h - t) / h).v;
}

double TimeProfile::d1(double t) const {
  if (constant_) return 0.0;
  const double h = 0.5 * r_;
  if (t < 0.5) return level_ * quintic((t - h) / h).d1 / h;
  return -level_ * quintic((1.0 - h - t) / h).d1 / h;
}

double TimeProfile::d2(double t) const {
  if (constant_) return 0.0;
  const double h = 0.5 * r_;
  if (t < 0.5) return level_ * quintic((t - h) / h).d2 / (h * h);
  return level_ * quintic((1.0 - h - t) / h).d2 / (h * h);
}

double TimeProfile::sup_d1() const {
  if (constant_) return 0.0;
  return level_ * 1.875 / (0.5 * r_);
}

double TimeProfile::sup_d2() const {
  if (constant_) return 0.0;
  const double h = 0.5 * r_;
  return level_ * (10.0 / std::sqrt(3.0)) / (h * h);
}

double CarlemanWeight::value(double x, double y, double t) const {
  const double p = profile.value(t);
  const double X = x / R + p, Y = y / R + p;
  return X * X + Y * Y;
}

double CarlemanWeight::dx(double x, double t) const { return 2.0 * (x / R + profile.value(t)) / R; }

double CarlemanWeight::dt(double x, double y, double t) const {
  const double p = profile.value(t);
  return 2.0 * (x / R + p + y / R + p) * profile.d1(t);
}

double CarlemanWeight::distance(double x, double y, double t) const { return std::sqrt(value(x, y, t)); }

double min_alpha(double R, const TimeProfile& profile) {
  if (!(R > 0.0)) throw ZklabError("min_alpha: R must be positive");
  const double m1 = std::max({profile.sup_d1(), std::sqrt(profile.sup_d2()), 1.0});
  return std::sqrt(m1 * R * R * R);
}

BumpDerivs bump(double u, double centre, double half_width) {
  const double s = (u - centre) / half_width;
  if (std::abs(s) >= 1.0) return {0.0, 0.0, 0.0, 0.0};
  const double q = 1.0 - s * s;
  const double q2 = q * q;
  const double h = half_width;
  return {q2 * q2, -8.0 * s * q2 * q / h, q2 * (56.0 * s * s - 8.0) / (h * h),
          48.0 * s * q * (3.0 - 7.0 * s * s) / (h * h * h)};
}

double admissibility_margin(const TestFunctionG& g, const CarlemanWeight& w, int samples) {
  if (samples < 2) throw ZklabError("admissibility_margin: need at least 2 samples per axis");
  double worst = std::numeric_limits<double>::infinity();
  for (int k = 0; k < samples; ++k) {
    const double t = g.t0 + (g.t1 - g.t0) * k / (samples - 1);
    for (int j = 0; j < samples; ++j) {
      const double y = g.cy - g.hy + 2.0 * g.hy * j / (samples - 1);
      for (int i = 0; i < samples; ++i) {
        const double x = g.cx - g.hx + 2.0 * g.hx * i / (samples - 1);
        worst = std::min(worst, w.distance(x, y, t) - 1.0);
      }
    }
  }
  return worst;
}

TestFunctionG generate_admissible_g(std::uint64_t seed, double R, const TimeProfile& profile, double alpha_hint) {
  if (!(R > 0.0)) throw ZklabError("generate_admissible_g: R must be positive");
  const double alpha = alpha_hint > 0.0 ? alpha_hint : 2.0 * min_alpha(R, profile);
  const CarlemanWeight w{R, profile};
  constexpr double budget = 12.0;
  constexpr double required_margin = 0.05;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int attempt = 0; attempt < 100; ++attempt) {
    const double tm = 0.05 + 0.9 * unit(rng);
    const double angle = 2.0 * std::numbers::pi * unit(rng);
    const double rho = 1.5 + unit(rng);
    const double p = profile.value(tm);
    TestFunctionG g;
    g.cx = R * (rho * std::cos(angle) - p);
    g.cy = R * (rho * std::sin(angle) - p);
    const double grad = 2.0 * (rho + 0.5) / R;
    g.hx = std::min(0.25 * R, budget / (2.0 * alpha * grad)) * (0.6 + 0.4 * unit(rng));
    g.hy = std::min(0.25 * R, budget / (2.0 * alpha * grad)) * (0.6 + 0.4 * unit(rng));
    double ht = std::min({0.08, tm, 1.0 - tm});
    for (int halvings = 0; halvings < 40; ++halvings) {
      double slope = 0.0;
      for (int k = 0; k <= 32; ++k) slope = std::max(slope, std::abs(profile.d1(tm - ht + 2.0 * ht * k / 32.0)));
      if (alpha * 4.0 * std::numbers::sqrt2 * (rho + 0.5) * slope * ht <= budget) break;
      ht *= 0.5;
    }
    g.t0 = tm - ht;
    g.t1 = tm + ht;
    g.amplitude = 0.5 + 1.5 * unit(rng);
    if (admissibility_margin(g, w) >= required_margin) return g;
  }
  throw ZklabError("generate_admissible_g: no admissible support after 100 attempts");
}

SplitReport conjugated_apply(const TestFunctionG& g, const TestFunctionG& g2, double alpha, const CarlemanWeight& w,
                             int order) {
  if (!(alpha > 0.0)) throw ZklabError("conjugated_apply: alpha must be positive");
  const Node3 q = box_rule(g.cx - g.hx, g.cx + g.hx, g.cy - g.hy, g.cy + g.hy, g.t0, g.t1, order);
  const double shift = max_alpha_phi(q, alpha, w);
  const double pxx = w.dxx(), pyy = w.dxx();

  auto f_at = [&](const TestFunctionG& gg, double x, double y, double t, FLocal& f, AS& as, double& h) {
    const GLocal d = combine(gg.amplitude, bump(x, gg.cx, gg.hx), bump(y, gg.cy, gg.hy), bump(t, gg.tc(), gg.ht()));
    const double E = std::exp(alpha * w.value(x, y, t) - shift);
    const double px = w.dx(x, t), py = w.dx(y, t), pt = w.dt(x, y, t);
    f = conjugate_up(d, E, alpha, px, py, pxx, pyy, pt);
    as = split_terms(f, alpha, px, py, pxx, pyy, pt);
    h = E * (d.gt + d.gxxx + d.gyyy);
  };

  double hh = 0.0, err = 0.0, af = 0.0, aa = 0.0, ff = 0.0, as_cross = 0.0;
  for (std::size_t k = 0; k < q.t.size(); ++k)
    for (std::size_t j = 0; j < q.y.size(); ++j)
      for (std::size_t i = 0; i < q.x.size(); ++i) {
        const double wq = q.wx[i] * q.wy[j] * q.wt[k];
        FLocal f;
        AS as;
        double h;
        f_at(g, q.x[i], q.y[j], q.t[k], f, as, h);
        hh += wq * h * h;
        err += wq * (h - as.a - as.s) * (h - as.a - as.s);
        af += wq * as.a * f.f;
        aa += wq * as.a * as.a;
        ff += wq * f.f * f.f;
        as_cross += wq * as.a * as.s;
      }

  SplitReport rep;
  rep.h_norm = std::sqrt(hh);
  rep.split_error = hh > 0.0 ? std::sqrt(err / hh) : 0.0;
  rep.skew_pairing = (aa > 0.0 && ff > 0.0) ? std::abs(af) / std::sqrt(aa * ff) : 0.0;
  rep.energy_gap = hh > 0.0 ? (hh - 2.0 * as_cross) / hh : 0.0;

  // Symmetry of S on the overlap of the two supports.
  const double x0 = std::max(g.cx - g.hx, g2.cx - g2.hx), x1 = std::min(g.cx + g.hx, g2.cx + g2.hx);
  const double y0 = std::max(g.cy - g.hy, g2.cy - g2.hy), y1 = std::min(g.cy + g.hy, g2.cy + g2.hy);
  const double t0 = std::max(g.t0, g2.t0), t1 = std::min(g.t1, g2.t1);
  if (x1 > x0 && y1 > y0 && t1 > t0) {
    const Node3 o = box_rule(x0, x1, y0, y1, t0, t1, order);
    double sf_h = 0.0, f_sh = 0.0, sf2 = 0.0, h2 = 0.0, f2 = 0.0, sh2 = 0.0;
    for (std::size_t k = 0; k < o.t.size(); ++k)
      for (std::size_t j = 0; j < o.y.size(); ++j)
        for (std::size_t i = 0; i < o.x.size(); ++i) {
          const double wq = o.wx[i] * o.wy[j] * o.wt[k];
          FLocal f1, f2l;
          AS s1, s2;
          double unused;
          f_at(g, o.x[i], o.y[j], o.t[k], f1, s1, unused);
          f_at(g2, o.x[i], o.y[j], o.t[k], f2l, s2, unused);
          sf_h += wq * s1.s * f2l.f;
          f_sh += wq * f1.f * s2.s;
          sf2 += wq * s1.s * s1.s;
          h2 += wq * f2l.f * f2l.f;
          f2 += wq * f1.f * f1.f;
          sh2 += wq * s2.s * s2.s;
        }
    const double scale = std::sqrt(sf2 * h2) + std::sqrt(f2 * sh2);
    rep.symmetry_gap = scale > 0.0 ? std::abs(sf_h - f_sh) / scale : 0.0;
  }
  return rep;
}

CarlemanReport check_inequality_18(const TestFunctionG& g, double R, double alpha, const TimeProfile& profile,
                                   int order) {
  return carleman_check(g, R, alpha, profile, nullptr, order);
}

CarlemanReport check_inequality_24(const TestFunctionG& g, double R, double alpha, const TimeProfile& profile,
                                   const LowerOrderCoefficients& coeffs, int order) {
  return carleman_check(g, R, alpha, profile, &coeffs, order);
}

namespace {

// Periodic Catmull-Rom interpolation on a uniform grid.
class BicubicField {
 public:
  explicit BicubicField(RealField f) : f_(std::move(f)) {}

  double operator()(double x, double y) const {
    const Grid2D& g = f_.grid;
    const double fx = (x - g.x0) / g.dx();
    const double fy = (y - g.y0) / g.dy();
    const double ix = std::floor(fx);
    const double iy = std::floor(fy);
    double wx[4], wy[4];
    weights(fx - ix, wx);
    weights(fy - iy, wy);
    double acc = 0.0;
    for (int b = 0; b < 4; ++b) {
      const int j = wrap(static_cast<long>(iy) - 1 + b, g.ny);
      double row = 0.0;
      for (int a = 0; a < 4; ++a) row += wx[a] * f_.at(wrap(static_cast<long>(ix) - 1 + a, g.nx), j);
      acc += wy[b] * row;
    }
    return acc;
  }

 private:
  static int wrap(long i, int n) { return static_cast<int>(((i % n) + n) % n); }
  static void weights(double s, double w[4]) {
    const double s2 = s * s, s3 = s2 * s;
    w[0] = 0.5 * (-s3 + 2.0 * s2 - s);
    w[1] = 0.5 * (3.0 * s3 - 5.0 * s2 + 2.0);
    w[2] = 0.5 * (-3.0 * s3 + 4.0 * s2 + s);
    w[3] = 0.5 * (s3 - s2);
  }

  RealField f_;
};

struct SnapshotSeries {
  std::vector<double> times;
  std::vector<BicubicField> fields;

  double operator()(double x, double y, double t) const {
    if (t <= times.front()) return fields.front()(x, y);
    if (t >= times.back()) return fields.back()(x, y);
    const auto it = std::upper_bound(times.begin(), times.end(), t);
    const std::size_t k = static_cast<std::size_t>(it - times.begin()) - 1;
    const double s = (t - times[k]) / (times[k + 1] - times[k]);
    return (1.0 - s) * fields[k](x, y) + s * fields[k + 1](x, y);
  }
};

}  // namespace

LowerOrderCoefficients coefficients_from_trajectories(const Trajectory& u1, const Trajectory& u2, int refine) {
  if (refine < 1) throw ZklabError("coefficients_from_trajectories: refine must be >= 1");
  if (u1.times.size() != u2.times.size() || u1.times.size() < 2)
    throw ZklabError("coefficients_from_trajectories: need matching snapshot lists with at least two entries");
  auto a0 = std::make_shared<SnapshotSeries>();
  auto a1 = std::make_shared<SnapshotSeries>();
  for (std::size_t k = 0; k < u1.times.size(); ++k) {
    if (std::abs(u1.times[k] - u2.times[k]) > 1e-12)
      throw ZklabError("coefficients_from_trajectories: snapshot times differ");
    const auto c = difference_coefficients(u1.snapshots[k], u2.snapshots[k]);
    a0->times.push_back(u1.times[k]);
    a1->times.push_back(u1.times[k]);
    a0->fields.emplace_back(refine == 1 ? c.a0 : upsample(forward_transform(c.a0), refine));
    a1->fields.emplace_back(refine == 1 ? c.a1 : upsample(forward_transform(c.a1), refine));
  }
  return {[a0](double x, double y, double t) { return (*a0)(x, y, t); },
          [a1](double x, double y, double t) { return (*a1)(x, y, t); }};
}

}  // namespace zklab
