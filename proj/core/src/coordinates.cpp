#include "zklab/coordinates.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "zklab/quadrature.hpp"
#include "zklab/spectral.hpp"

namespace zklab {

namespace {

// Composite Gauss-Legendre nodes on [a, b].
void composite_rule(double a, double b, int panels, int order, std::vector<double>& x, std::vector<double>& w) {
  x.clear();
  w.clear();
  std::vector<double> px, pw;
  const double len = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    gauss_on_interval(order, a + p * len, a + (p + 1) * len, px, pw);
    x.insert(x.end(), px.begin(), px.end());
    w.insert(w.end(), pw.begin(), pw.end());
  }
}

}  // namespace

CoordinateMap::CoordinateMap() : mu(std::pow(4.0, -1.0 / 3.0)), lambda(std::sqrt(3.0) * std::pow(4.0, -1.0 / 3.0)) {}

std::pair<double, double> CoordinateMap::to_symmetric(double x, double y) const {
  return {mu * x + lambda * y, mu * x - lambda * y};
}

std::pair<double, double> CoordinateMap::to_original(double xs, double ys) const {
  return {(xs + ys) / (2.0 * mu), (xs - ys) / (2.0 * lambda)};
}

double transport_weight_rate(double a) {
  if (!(a > 0.0)) throw ZklabError("transport_weight_rate: a must be positive");
  const CoordinateMap m;
  return a / std::pow(2.0 * m.mu, 1.5);
}

NormIdentityReport check_norm_identity(const std::function<double(double, double)>& f, double a, double half_width,
                                       int panels, int order) {
  if (!(half_width > 0.0) || panels < 2 || order < 2) throw ZklabError("check_norm_identity: bad quadrature setup");
  const CoordinateMap m;
  const double a_sym = transport_weight_rate(a);
  const int half = std::max(1, panels / 2);
  NormIdentityReport rep;

  std::vector<double> xl, wl, xr, wr, ys, wy;
  composite_rule(-half_width, 0.0, half, order, xl, wl);
  composite_rule(0.0, half_width, half, order, xr, wr);
  composite_rule(-half_width, half_width, panels, order, ys, wy);
  auto original_row = [&](const std::vector<double>& xs, const std::vector<double>& ws) {
    double s = 0.0;
    for (std::size_t q = 0; q < ys.size(); ++q) {
      double row = 0.0;
      for (std::size_t p = 0; p < xs.size(); ++p) {
        const double v = f(xs[p], ys[q]);
        row += ws[p] * v * v * std::exp(a * std::pow(std::abs(xs[p]), 1.5));
      }
      s += wy[q] * row;
    }
    return s;
  };
  rep.original = original_row(xl, wl) + original_row(xr, wr);

  // Enough room for the image of the original square.
  const double hw = (m.mu + m.lambda) * half_width;
  std::vector<double> yq, wq;
  composite_rule(-hw, hw, panels, order, yq, wq);
  double sym = 0.0;
  std::vector<double> xa, wa, xb, wb;
  for (std::size_t q = 0; q < yq.size(); ++q) {
    const double yp = yq[q];
    composite_rule(-hw, -yp, half, order, xa, wa);
    composite_rule(-yp, hw, half, order, xb, wb);
    double row = 0.0;
    auto add = [&](const std::vector<double>& xs, const std::vector<double>& ws) {
      for (std::size_t p = 0; p < xs.size(); ++p) {
        const auto [x, y] = m.to_original(xs[p], yp);
        const double v = f(x, y);
        row += ws[p] * v * v * std::exp(a_sym * std::pow(std::abs(xs[p] + yp), 1.5));
      }
    };
    add(xa, wa);
    add(xb, wb);
    sym += wq[q] * row;
  }
  rep.symmetric = m.jacobian() * sym;
  rep.rel_error = std::abs(rep.original - rep.symmetric) / std::max(std::abs(rep.original), 1e-300);
  return rep;
}

EquivalenceReport solve_equivalence_check(const std::function<double(double, double)>& u0,
                                          const EquivalenceConfig& cfg) {
  const CoordinateMap m;
  const Grid2D go = Grid2D::centered(cfg.n, cfg.L_original);
  const Grid2D gs = Grid2D::centered(cfg.n, cfg.L_symmetric);
  const RealField uo = RealField::from_function(go, u0);
  const RealField us = RealField::from_function(gs, [&](double xs, double ys) {
    const auto [x, y] = m.to_original(xs, ys);
    return u0(x, y);
  });

  SolverConfig sc;
  sc.dt = cfg.dt;
  sc.t_end = cfg.t_end;
  sc.nonlinear_form = NonlinearForm::Asymmetric;
  const RealField ao = zk_solve(uo, sc, DispersionSymbol::asymmetric()).final_state();
  sc.nonlinear_form = NonlinearForm::Symmetric;
  const RealField as = zk_solve(us, sc, DispersionSymbol::symmetric()).final_state();

  EquivalenceReport rep;
  rep.norm_original = inner(ao, ao);
  rep.norm_symmetric = m.jacobian() * inner(as, as);
  rep.rel_norm_gap = std::abs(rep.norm_original - rep.norm_symmetric) / std::max(rep.norm_original, 1e-300);

  const double peak = as.max_abs();
  if (peak == 0.0) return rep;
  std::vector<std::pair<double, double>> pts;
  std::vector<double> ref;
  for (int j = 0; j < gs.ny; ++j) {
    for (int i = 0; i < gs.nx; ++i) {
      const double v = as.at(i, j);
      if (std::abs(v) < cfg.sample_threshold * peak) continue;
      const auto p = m.to_original(gs.x(i), gs.y(j));
      if (std::abs(p.first) >= 0.5 * go.Lx || std::abs(p.second) >= 0.5 * go.Ly) continue;
      pts.push_back(p);
      ref.push_back(v);
    }
  }
  const auto mapped = SpectralInterpolant(ao).at(pts);
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < ref.size(); ++k) {
    num += (mapped[k] - ref[k]) * (mapped[k] - ref[k]);
    den += ref[k] * ref[k];
  }
  rep.samples = static_cast<int>(ref.size());
  rep.rel_l2_sampled = den > 0.0 ? std::sqrt(num / den) : 0.0;
  return rep;
}

}  // namespace zklab
