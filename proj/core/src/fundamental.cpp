#include "zklab/fundamental.hpp"

#include <boost/math/special_functions/airy.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "zklab/cutoff.hpp"
#include "zklab/quadrature.hpp"
#include "zklab/spectral.hpp"

namespace zklab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kPanelPoints = 8;
const double kCbrt3 = std::cbrt(3.0);

// Panel breakpoints on [a, b]: length <= h0 and <= scale*pi/freq at both ends.
template <class Freq>
std::vector<double> panel_breaks(const std::vector<double>& fixed, double h0, double scale, Freq freq) {
  std::vector<double> br{fixed.front()};
  for (std::size_t seg = 0; seg + 1 < fixed.size(); ++seg) {
    const double a = fixed[seg];
    const double b = fixed[seg + 1];
    double s = a;
    while (s < b) {
      double len = std::min(h0, b - s);
      for (int it = 0; it < 6; ++it) {
        const double f = std::max(freq(s), freq(s + len));
        const double lim = scale * kPi / std::max(f, 1e-300);
        if (len <= lim) break;
        len = lim;
      }
      s += len;
      if (b - s < 1e-13 * (b - a + 1.0)) s = b;
      br.push_back(s);
    }
  }
  return br;
}

template <class T, class F>
T panel_integrate(const std::vector<double>& br, F f) {
  const GaussRule& r = gauss_legendre(kPanelPoints);
  T acc{};
  for (std::size_t p = 0; p + 1 < br.size(); ++p) {
    const double half = 0.5 * (br[p + 1] - br[p]);
    const double mid = 0.5 * (br[p + 1] + br[p]);
    T part{};
    for (std::size_t k = 0; k < r.nodes.size(); ++k) part += r.weights[k] * f(mid + half * r.nodes[k]);
    acc += half * part;
  }
  return acc;
}

// A(c) = int tau(xi) exp(i(c xi + xi^3)) dxi over [-X, X]; real by symmetry.
double inner_xi_integral(double c, const SEvalConfig& cfg, double refine) {
  const double X = cfg.xi_max;
  const double knee = X - cfg.taper_width;
  const double h0 = X / (0.5 * cfg.n_quad);
  auto freq = [c](double xi) { return std::abs(c + 3.0 * xi * xi); };
  const auto br = panel_breaks({0.0, knee, X}, h0, refine, freq);
  const double half = panel_integrate<double>(br, [&](double xi) {
    return raised_cosine_taper(xi, X, cfg.taper_width) * std::cos(c * xi + xi * xi * xi);
  });
  return 2.0 * half;
}

cplx direct_once(double x, double y, const SEvalConfig& cfg) {
  const double X = cfg.xi_max;
  const double knee = X - cfg.taper_width;
  const double refine = 256.0 / cfg.n_quad;
  const double h0 = 2.0 * X / cfg.n_quad;
  auto freq = [x, y](double eta) {
    const double c = x + eta * eta;
    return std::abs(y) + 2.0 * std::abs(eta) * std::sqrt(std::max(-c, 0.0) / 3.0) + 1.0;
  };
  const auto br = panel_breaks({-X, -knee, 0.0, knee, X}, h0, refine, freq);
  const cplx sum = panel_integrate<cplx>(br, [&](double eta) {
    const double tau = raised_cosine_taper(eta, X, cfg.taper_width);
    if (tau == 0.0) return cplx(0.0, 0.0);
    const double a = inner_xi_integral(x + eta * eta, cfg, refine);
    return tau * a * cplx(std::cos(eta * y), std::sin(eta * y));
  });
  return sum / (4.0 * kPi * kPi);
}

cplx reduced_integrand(double s, double h, double x, double y) {
  const cplx xi(s, h);
  const cplx I(0.0, 1.0);
  const cplx pref = std::sqrt(kPi) / std::sqrt(-I * xi);
  const cplx phase = I * (xi * x + xi * xi * xi - y * y / (4.0 * xi));
  return pref * std::exp(phase);
}

cplx reduced_once(double x, double y, const SEvalConfig& cfg) {
  const double h = std::max(0.5, std::sqrt(std::max(x, 0.0) / 3.0));
  const double growth = std::max(h * h * h - h * x, 0.0);
  const double s_max = std::sqrt((growth + 45.0) / (3.0 * h));
  const double refine = 256.0 / cfg.n_quad;
  const double h0 = 2.0 * s_max / cfg.n_quad;
  auto freq = [=](double s) {
    const cplx xi(s, h);
    return std::abs(x + 3.0 * xi * xi + y * y / (4.0 * xi * xi));
  };
  const auto br = panel_breaks({-s_max, 0.0, s_max}, h0, refine, freq);
  const cplx sum = panel_integrate<cplx>(br, [&](double s) { return reduced_integrand(s, h, x, y); });
  return sum / (4.0 * kPi * kPi);
}

double airy_integrand(double x, double eta) {
  return boost::math::airy_ai((x + eta * eta) / kCbrt3);
}

double airy_eta_max(double x) { return std::sqrt(std::max(30.0 * kCbrt3 - x, 1.0)); }

}  // namespace

double raised_cosine_taper(double u, double xi_max, double width) {
  const double a = std::abs(u);
  const double knee = xi_max - width;
  if (a <= knee) return 1.0;
  if (a >= xi_max) return 0.0;
  return 0.5 * (1.0 + std::cos(kPi * (a - knee) / width));
}

void SEvalConfig::validate() const {
  if (!(taper_width > 0.0) || !(xi_max > taper_width)) throw ZklabError("SEvalConfig: need xi_max > taper_width > 0");
  if (n_quad < 256) throw ZklabError("SEvalConfig: n_quad must be >= 256");
  if (!(tol > 0.0)) throw ZklabError("SEvalConfig: tol must be positive");
}

SEvalConfig SEvalConfig::refined() const {
  SEvalConfig c = *this;
  c.n_quad *= 2;
  return c;
}

SPoint evaluate_S_direct(double x, double y, const SEvalConfig& cfg) {
  cfg.validate();
  const cplx coarse = direct_once(x, y, cfg);
  const cplx fine = direct_once(x, y, cfg.refined());
  SPoint out;
  out.value = fine;
  out.refinement_delta = std::abs(fine - coarse);
  out.converged = out.refinement_delta <= 10.0 * cfg.tol;
  return out;
}

SReduced evaluate_S_reduced(double x, double y, const SEvalConfig& cfg) {
  cfg.validate();
  const cplx coarse = reduced_once(x, y, cfg);
  const cplx fine = reduced_once(x, y, cfg.refined());
  SReduced out;
  out.value = fine.real();
  out.imag = fine.imag();
  out.refinement_delta = std::abs(fine - coarse);
  out.converged = out.refinement_delta <= 10.0 * cfg.tol;
  return out;
}

DecayFitReport verify_x_decay(double x_lo, double x_hi, int n, const SEvalConfig& cfg) {
  if (!(x_lo >= 1.0) || !(x_hi > x_lo)) throw ZklabError("verify_x_decay: need 1 <= x_lo < x_hi");
  if (n < 2) throw ZklabError("verify_x_decay: need at least two samples");
  DecayFitReport rep;
  rep.x_lo = x_lo;
  rep.x_hi = x_hi;
  std::vector<double> xs, logs;
  for (int k = 0; k < n; ++k) {
    const double x = x_lo + (x_hi - x_lo) * k / (n - 1);
    const double v = std::abs(evaluate_S_reduced(x, 0.0, cfg).value);
    rep.samples.push_back({x, v, 0.0});
    if (v > 1e-12) {
      xs.push_back(x);
      logs.push_back(std::log(v));
    }
  }
  rep.n_used = static_cast<int>(xs.size());
  if (rep.n_used < 5) return rep;

  auto fit = [&](auto basis, double& slope, double& icpt) {
    double su = 0, sl = 0, suu = 0, sul = 0;
    const double m = static_cast<double>(xs.size());
    for (std::size_t k = 0; k < xs.size(); ++k) {
      const double u = basis(xs[k]);
      su += u;
      sl += logs[k];
      suu += u * u;
      sul += u * logs[k];
    }
    slope = (m * sul - su * sl) / (m * suu - su * su);
    icpt = (sl - slope * su) / m;
    const double mean = sl / m;
    double ss_res = 0, ss_tot = 0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
      const double r = logs[k] - (icpt + slope * basis(xs[k]));
      ss_res += r * r;
      ss_tot += (logs[k] - mean) * (logs[k] - mean);
    }
    return ss_tot > 0 ? std::clamp(1.0 - ss_res / ss_tot, 0.0, 1.0) : 0.0;
  };

  double slope = 0, icpt = 0;
  rep.r2 = fit([](double x) { return std::pow(x, 1.5); }, slope, icpt);
  rep.c0_hat = -slope;
  rep.intercept = icpt;
  double s_lin = 0, i_lin = 0;
  rep.r2_linear = fit([](double x) { return x; }, s_lin, i_lin);
  for (auto& smp : rep.samples) {
    const double model = icpt + slope * std::pow(smp.x, 1.5);
    smp.fitted = std::exp(model);
    if (smp.abs_s > 1e-12) rep.max_residual = std::max(rep.max_residual, std::abs(std::log(smp.abs_s) - model));
  }
  rep.ok = true;
  return rep;
}

YDecayReport verify_y_decay(int m, double x_fixed, double y_max, const SEvalConfig& cfg, int n_samples) {
  if (m < 0) throw ZklabError("verify_y_decay: m must be >= 0");
  if (!(y_max > 0.0) || n_samples < 21) throw ZklabError("verify_y_decay: bad sampling window");
  YDecayReport rep;
  rep.m = m;
  rep.x_fixed = x_fixed;
  rep.y_max = y_max;
  const int band = std::max(1, n_samples / 20);
  int arg = 0;
  for (int k = 0; k < n_samples; ++k) {
    const double y = -y_max + 2.0 * y_max * k / (n_samples - 1);
    const double s = std::abs(evaluate_S_reduced(x_fixed, y, cfg).value);
    const double w = std::pow(1.0 + std::abs(y), m) * s;
    rep.ys.push_back(y);
    rep.weighted.push_back(w);
    if (w > rep.sup_value) {
      rep.sup_value = w;
      arg = k;
    }
    if (k < band || k >= n_samples - band) rep.edge_value = std::max(rep.edge_value, w);
  }
  rep.argmax_y = rep.ys[arg];
  rep.interior = arg >= band && arg < n_samples - band && std::isfinite(rep.sup_value);
  return rep;
}

double evaluate_S_airy(double x, double y, double eta_step) {
  const double eta_max = airy_eta_max(x);
  const int K = static_cast<int>(std::ceil(eta_max / eta_step));
  double sum = airy_integrand(x, 0.0);
  for (int k = 1; k <= K; ++k) {
    const double eta = k * eta_step;
    sum += 2.0 * std::cos(eta * y) * airy_integrand(x, eta);
  }
  return sum * eta_step / (2.0 * kPi * kCbrt3);
}

void KernelTableConfig::validate() const {
  if (!(half_width > 0.0) || !(spacing > 0.0) || !(eta_step > 0.0)) throw ZklabError("kernel table: sizes must be positive");
  if (!(window_taper > 0.0) || window_taper >= half_width) throw ZklabError("kernel table: taper must lie inside the table");
}

ConvolutionKernel::ConvolutionKernel(const KernelTableConfig& cfg) : cfg_(cfg) {
  cfg_.validate();
  n_ = static_cast<int>(std::lround(2.0 * cfg_.half_width / cfg_.spacing)) + 1;
  const double eta_max = airy_eta_max(-cfg_.half_width);
  const int K = static_cast<int>(std::ceil(eta_max / cfg_.eta_step)) + 1;

  // airy[i * K + k] = weight_k * Ai((X_i + eta_k^2)/3^{1/3})
  std::vector<double> airy(static_cast<std::size_t>(n_) * K);
  for (int i = 0; i < n_; ++i) {
    const double X = coordinate(i);
    for (int k = 0; k < K; ++k) {
      const double eta = k * cfg_.eta_step;
      const double w = (k == 0 ? 1.0 : 2.0) * cfg_.eta_step;
      airy[static_cast<std::size_t>(i) * K + k] = w * airy_integrand(X, eta);
    }
  }
  const int half = n_ / 2;  // coordinate(half) == 0
  std::vector<double> cosines(static_cast<std::size_t>(K));
  s_.assign(static_cast<std::size_t>(n_) * n_, 0.0);
  const double norm = 1.0 / (2.0 * kPi * kCbrt3);
  for (int j = half; j < n_; ++j) {
    const double Y = coordinate(j);
    for (int k = 0; k < K; ++k) cosines[k] = std::cos(k * cfg_.eta_step * Y);
    for (int i = 0; i < n_; ++i) {
      const double* a = &airy[static_cast<std::size_t>(i) * K];
      double acc = 0.0;
      for (int k = 0; k < K; ++k) acc += a[k] * cosines[k];
      s_[static_cast<std::size_t>(j) * n_ + i] = norm * acc;
      s_[static_cast<std::size_t>(n_ - 1 - j) * n_ + i] = norm * acc;
    }
  }
  window_.resize(n_);
  const double flat = cfg_.half_width - cfg_.window_taper;
  for (int i = 0; i < n_; ++i) {
    const double u = (std::abs(coordinate(i)) - flat) / cfg_.window_taper;
    window_[i] = 1.0 - smooth_step(u);
  }
}

double ConvolutionKernel::sample(int i, int j) const { return s_[static_cast<std::size_t>(j) * n_ + i]; }

double ConvolutionKernel::table_mass() const {
  double acc = 0.0;
  for (int j = 0; j < n_; ++j)
    for (int i = 0; i < n_; ++i) acc += s_[static_cast<std::size_t>(j) * n_ + i] * window_[i] * window_[j];
  return acc * cfg_.spacing * cfg_.spacing;
}

std::vector<cplx> ConvolutionKernel::transform_at(const std::vector<double>& qx, const std::vector<double>& qy) const {
  const std::size_t na = qx.size();
  // partial[a * n + j] = sum_i Sw(i, j) exp(-i qx_a X_i)
  std::vector<cplx> partial(na * n_);
  std::vector<cplx> ex(n_);
  for (std::size_t a = 0; a < na; ++a) {
    for (int i = 0; i < n_; ++i) {
      const double ph = -qx[a] * coordinate(i);
      ex[i] = window_[i] * cplx(std::cos(ph), std::sin(ph));
    }
    for (int j = 0; j < n_; ++j) {
      const double* s = &s_[static_cast<std::size_t>(j) * n_];
      cplx acc(0.0, 0.0);
      for (int i = 0; i < n_; ++i) acc += s[i] * ex[i];
      partial[a * n_ + j] = acc * window_[j];
    }
  }
  // S is even in Y, so the Y transform is a cosine sum.
  std::vector<cplx> out(na * qy.size());
  std::vector<double> cy(n_);
  const double h2 = cfg_.spacing * cfg_.spacing;
  for (std::size_t b = 0; b < qy.size(); ++b) {
    for (int j = 0; j < n_; ++j) cy[j] = std::cos(qy[b] * coordinate(j));
    for (std::size_t a = 0; a < na; ++a) {
      const cplx* p = &partial[a * n_];
      cplx acc(0.0, 0.0);
      for (int j = 0; j < n_; ++j) acc += p[j] * cy[j];
      out[b * na + a] = h2 * acc;
    }
  }
  return out;
}

RealField linear_solution_via_convolution(const RealField& u0, double t, const ConvolutionKernel& kernel) {
  if (!(t > 0.0)) throw ZklabError("linear_solution_via_convolution: t must be positive");
  const Grid2D& g = u0.grid;
  SpectralField c = forward_transform(u0);
  const double s = std::cbrt(t);
  std::vector<double> qx(g.nx), qy(g.ny);
  for (int i = 0; i < g.nx; ++i) qx[i] = s * g.kx(i);
  for (int j = 0; j < g.ny; ++j) qy[j] = s * g.ky(j);
  const auto mult = kernel.transform_at(qx, qy);
  for (std::size_t n = 0; n < c.coeffs.size(); ++n) c.coeffs[n] *= mult[n];
  return inverse_transform(c);
}

RealField linear_solution_via_convolution(const RealField& u0, double t, const KernelTableConfig& cfg) {
  return linear_solution_via_convolution(u0, t, ConvolutionKernel(cfg));
}

}  // namespace zklab
