#include "zklab/weights.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "zklab/cutoff.hpp"
#include "zklab/quadrature.hpp"
#include "zklab/spectral.hpp"

namespace zklab {

namespace {

constexpr double kLogMax = 709.0;

double log_truncated(double z, double t, int n, double a0) {
  const double a = decay_rate(t, a0);
  if (z <= 0.0) return a / 4.0;
  if (z <= 1.0) return a * theta_poly(z).value;
  if (z <= n) return a * std::pow(z, 1.5);
  return std::log(p2_taylor(z, t, n, a0).value);
}

double box_factor(double s, double lo, double len, const WeightWindow& w) {
  const double d = std::min(s - lo, lo + len - s);
  if (w.ramp <= 0.0) return d >= w.margin * len ? 1.0 : 0.0;
  return smooth_step((d - w.margin * len) / (w.ramp * len));
}

const char* corner_name(double x, double y) {
  if (x >= 0.0) return y >= 0.0 ? "(+x, +y)" : "(+x, -y)";
  return y >= 0.0 ? "(-x, +y)" : "(-x, -y)";
}

// Log weight on a grid. Every weight is a function of x + y, so on grids with
// dx == dy it only needs nx + ny - 1 evaluations.
class DiagonalLogWeight {
 public:
  DiagonalLogWeight(const WeightSpec& spec, const Grid2D& g, double t) : spec_(spec), g_(g), t_(t) {
    diagonal_ = g.dx() == g.dy();
    if (!diagonal_) return;
    table_.resize(static_cast<std::size_t>(g.nx + g.ny - 1));
    for (int k = 0; k < g.nx + g.ny - 1; ++k) table_[k] = log_weight(spec, g.x0 + k * g.dx(), g.y0, t);
  }
  double operator()(int i, int j) const {
    return diagonal_ ? table_[i + j] : log_weight(spec_, g_.x(i), g_.y(j), t_);
  }

 private:
  WeightSpec spec_;
  Grid2D g_;
  double t_;
  bool diagonal_ = false;
  std::vector<double> table_;
};

}  // namespace

double decay_rate(double t, double a0) {
  if (!(a0 > 0.0)) throw ZklabError("decay_rate: a0 must be positive");
  if (t < 0.0) throw ZklabError("decay_rate: t must be >= 0");
  return a0 / std::sqrt(1.0 + 13.5 * a0 * a0 * t);
}

ThetaValues theta_poly(double z) {
  if (!(z >= 0.0 && z <= 1.0)) throw ZklabError("theta_poly: z must lie in [0, 1]");
  const double z2 = z * z;
  const double z3 = z2 * z;
  return {0.25 + (15.0 / 8.0) * z3 - 1.5 * z3 * z + (3.0 / 8.0) * z3 * z2,
          (45.0 / 8.0) * z2 - 6.0 * z3 + (15.0 / 8.0) * z2 * z2,
          (45.0 / 4.0) * z - 18.0 * z2 + 7.5 * z3};
}

double theta_second_factored(double z) {
  const double r10 = std::sqrt(10.0);
  const double q = r10 * z - 12.0 / r10;
  return 0.75 * z * (q * q + 0.6);
}

double theta_third(double z) { return 45.0 / 4.0 - 36.0 * z + 22.5 * z * z; }

TaylorValues p2_taylor(double z, double t, int n, double a0) {
  if (n < 1) throw ZklabError("p2_taylor: n must be >= 1");
  if (z < n) throw ZklabError("p2_taylor: z must be >= n");
  const double a = decay_rate(t, a0);
  const double nn = static_cast<double>(n);
  const double e = std::exp(a * std::pow(nn, 1.5));
  const double c1 = 1.5 * a * std::sqrt(nn);
  const double c2 = c1 * c1 + 0.75 * a / std::sqrt(nn);
  const double d = z - nn;
  return {e + c1 * e * d + c2 * e * d * d / 2.0, c1 * e + c2 * e * d, c2 * e};
}

double kato_cutoff(double s) { return 1.0 - smooth_step((s - 1.0) / 9.0); }

double kato_theta(double x, int n) {
  if (n < 1) throw ZklabError("kato_theta: n must be >= 1");
  const double nn = static_cast<double>(n);
  if (x <= nn) return x;
  const double hi = std::min(x, 10.0 * nn);
  const int panels = 16;
  const double len = (hi - nn) / panels;
  const GaussRule& r = gauss_legendre(16);
  double acc = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double mid = nn + (p + 0.5) * len;
    for (std::size_t k = 0; k < r.nodes.size(); ++k) acc += r.weights[k] * kato_cutoff((mid + 0.5 * len * r.nodes[k]) / nn);
  }
  return nn + 0.5 * len * acc;
}

const char* weight_kind_name(WeightKind k) {
  switch (k) {
    case WeightKind::ExpAbs: return "exp_abs";
    case WeightKind::ExpPlus: return "exp_plus";
    case WeightKind::ExpLinear: return "exp_linear";
    case WeightKind::Poly: return "poly";
    case WeightKind::TruncatedPhiN: return "truncated_phi_n";
    case WeightKind::KatoPhiN: return "kato_phi_n";
  }
  return "unknown";
}

void WeightSpec::validate() const {
  switch (kind) {
    case WeightKind::ExpAbs:
      if (a < 0.0) throw ZklabError("weight exp_abs: a must be >= 0");
      break;
    case WeightKind::Poly:
      if (a < 0.0) throw ZklabError("weight poly: a must be >= 0");
      break;
    case WeightKind::ExpPlus:
      if (!(a0 > 0.0)) throw ZklabError("weight exp_plus: a0 must be positive");
      break;
    case WeightKind::TruncatedPhiN:
      if (!(a0 > 0.0)) throw ZklabError("weight truncated_phi_n: a0 must be positive");
      if (n < 1) throw ZklabError("weight truncated_phi_n: n must be >= 1");
      break;
    case WeightKind::ExpLinear:
      if (beta < 0.0) throw ZklabError("weight exp_linear: beta must be >= 0");
      break;
    case WeightKind::KatoPhiN:
      if (beta < 0.0) throw ZklabError("weight kato_phi_n: beta must be >= 0");
      if (n < 1) throw ZklabError("weight kato_phi_n: n must be >= 1");
      break;
  }
}

double log_weight(const WeightSpec& spec, double x, double y, double t) {
  const double z = x + y;
  switch (spec.kind) {
    case WeightKind::ExpAbs: return spec.a * std::pow(std::abs(z), 1.5);
    case WeightKind::ExpPlus: return decay_rate(t, spec.a0) * std::pow(std::max(z, 0.0), 1.5);
    case WeightKind::ExpLinear: return 2.0 * spec.beta * z;
    case WeightKind::Poly: return 2.0 * spec.a * std::log1p(std::abs(z));
    case WeightKind::TruncatedPhiN: return log_truncated(z, t, spec.n, spec.a0);
    case WeightKind::KatoPhiN: return 2.0 * spec.beta * kato_theta(z, spec.n);
  }
  return 0.0;
}

double eval_weight(const WeightSpec& spec, double x, double y, double t) {
  return std::exp(log_weight(spec, x, y, t));
}

bool WeightWindow::active() const { return margin > 0.0 || ramp > 0.0 || std::isfinite(z_cap); }

std::string WeightWindow::describe() const {
  if (!active()) return "none";
  std::ostringstream os;
  os << "box margin " << margin << " ramp " << ramp;
  if (std::isfinite(z_cap)) os << ", x+y cap " << z_cap << " ramp " << z_ramp;
  return os.str();
}

void WeightWindow::validate() const {
  if (margin < 0.0 || ramp < 0.0 || margin + ramp >= 0.5) throw ZklabError("window: need margin, ramp >= 0 and margin + ramp < 0.5");
  if (!(z_ramp > 0.0)) throw ZklabError("window: z_ramp must be positive");
}

double window_value(const WeightWindow& w, const Grid2D& g, double x, double y) {
  if (!w.active()) return 1.0;
  double v = box_factor(x, g.x0, g.Lx, w) * box_factor(y, g.y0, g.Ly, w);
  if (std::isfinite(w.z_cap)) v *= smooth_step((w.z_cap - (x + y)) / w.z_ramp);
  return v;
}

double weighted_norm(const RealField& f, const WeightSpec& spec, double t, const WeightWindow& window) {
  spec.validate();
  window.validate();
  const Grid2D& g = f.grid;
  const DiagonalLogWeight lw(spec, g, t);
  double acc = 0.0;
  for (int j = 0; j < g.ny; ++j) {
    const double y = g.y(j);
    for (int i = 0; i < g.nx; ++i) {
      const double v = f.at(i, j);
      if (v == 0.0) continue;
      const double x = g.x(i);
      const double win = window_value(window, g, x, y);
      if (win <= 0.0) continue;
      const double lg = lw(i, j) + std::log(win) + 2.0 * std::log(std::abs(v));
      if (lg > kLogMax) {
        throw ZklabError(std::string("weighted_norm: weight overflow near the ") + corner_name(x, y) +
                         " corner of the domain");
      }
      acc += std::exp(lg);
    }
  }
  return acc * g.dx() * g.dy();
}

double weighted_edge_fraction(const RealField& f, const WeightSpec& spec, double t, const WeightWindow& window,
                              int cells) {
  const Grid2D& g = f.grid;
  const DiagonalLogWeight lw(spec, g, t);
  double edge = 0.0, total = 0.0;
  for (int j = 0; j < g.ny; ++j) {
    const double y = g.y(j);
    const bool ey = j < cells || j >= g.ny - cells;
    for (int i = 0; i < g.nx; ++i) {
      const double v = f.at(i, j);
      if (v == 0.0) continue;
      const double x = g.x(i);
      const double win = window_value(window, g, x, y);
      if (win <= 0.0) continue;
      const double term = std::exp(std::min(lw(i, j) + std::log(win) + 2.0 * std::log(std::abs(v)), kLogMax));
      total += term;
      if (ey || i < cells || i >= g.nx - cells) edge += term;
    }
  }
  return total > 0.0 ? edge / total : 0.0;
}

RealField apply_Js(const RealField& f, double s) {
  if (s < 0.0) throw ZklabError("apply_Js: s must be >= 0");
  if (s == 0.0) return f;
  SpectralField c = forward_transform(f);
  const Grid2D& g = f.grid;
  for (int j = 0; j < g.ny; ++j) {
    const double ky = g.ky(j);
    for (int i = 0; i < g.nx; ++i) {
      const double kx = g.kx(i);
      c.at(i, j) *= std::pow(1.0 + kx * kx + ky * ky, 0.5 * s);
    }
  }
  return inverse_transform(c);
}

DominanceReport weight_dominance(const std::vector<int>& ns, double a0, const std::vector<double>& times,
                                 int samples_per_n) {
  if (ns.empty() || times.empty() || samples_per_n < 2) throw ZklabError("weight_dominance: empty sample set");
  DominanceReport rep;
  {
    double best = -1e300;
    for (int k = 0; k <= 100000; ++k) {
      const double z = k / 100000.0;
      best = std::max(best, theta_poly(z).value - std::pow(z, 1.5));
    }
    rep.closed_form = std::exp(a0 * best);
  }
  double best_log = -1e300;
  for (int n : ns) {
    const double z_hi = 3.0 * n;
    for (double t : times) {
      const double a = decay_rate(t, a0);
      double prev = -1e300;
      for (int k = 0; k < samples_per_n; ++k) {
        const double z = z_hi * k / (samples_per_n - 1);
        const double lw = log_truncated(z, t, n, a0);
        const double lr = lw - a * std::pow(z, 1.5);
        if (lr > best_log) {
          best_log = lr;
          rep.argmax_z = z;
          rep.argmax_n = n;
        }
        if (k > 0) rep.worst_monotonicity = std::min(rep.worst_monotonicity, lw - prev);
        prev = lw;
      }
      // Seam values from the two adjacent pieces.
      const double left0 = a / 4.0;
      const double right0 = a * theta_poly(0.0).value;
      const double left1 = a * theta_poly(1.0).value;
      const double right1 = a;
      const double leftn = a * std::pow(static_cast<double>(n), 1.5);
      const double rightn = std::log(p2_taylor(n, t, n, a0).value);
      for (auto [l, r] : {std::pair{left0, right0}, std::pair{left1, right1}, std::pair{leftn, rightn}}) {
        rep.worst_seam_gap = std::max(rep.worst_seam_gap, std::abs(std::expm1(r - l)));
      }
    }
  }
  rep.constant = std::exp(best_log);
  return rep;
}

}  // namespace zklab
