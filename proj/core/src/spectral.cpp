#include "zklab/spectral.hpp"

#include <cmath>
#include <cstdlib>

#include "zklab/fft.hpp"

namespace zklab {

namespace {

cplx i_pow(int n) {
  switch (((n % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

double int_pow(double base, int n) {
  double r = 1.0;
  for (int k = 0; k < n; ++k) r *= base;
  return r;
}

}  // namespace

SpectralField forward_transform(const RealField& f) {
  f.grid.validate();
  if (f.values.size() != f.grid.size()) throw ZklabError("forward_transform: size mismatch");
  if (!f.all_finite()) throw ZklabError("forward_transform: non-finite input");
  SpectralField out(f.grid);
  std::vector<cplx> in(f.values.begin(), f.values.end());
  fft::forward_2d(f.grid.nx, f.grid.ny, in.data(), out.coeffs.data());
  const double scale = 1.0 / static_cast<double>(f.grid.size());
  for (auto& c : out.coeffs) c *= scale;
  return out;
}

RealField inverse_transform(const SpectralField& f) {
  std::vector<cplx> tmp(f.coeffs.size());
  fft::backward_2d(f.grid.nx, f.grid.ny, f.coeffs.data(), tmp.data());
  RealField out(f.grid);
  for (std::size_t n = 0; n < tmp.size(); ++n) out.values[n] = tmp[n].real();
  return out;
}

RealField upsample(const SpectralField& f, int factor) {
  if (factor < 1) throw ZklabError("upsample: factor must be at least 1");
  const Grid2D& g = f.grid;
  const Grid2D fine = g.refined(factor);
  SpectralField out(fine);
  for (int j = 0; j < g.ny; ++j) {
    const int my = g.mode_y(j);
    if (my == -g.ny / 2) continue;
    const int jf = my < 0 ? my + fine.ny : my;
    for (int i = 0; i < g.nx; ++i) {
      const int mx = g.mode_x(i);
      if (mx == -g.nx / 2) continue;
      out.at(mx < 0 ? mx + fine.nx : mx, jf) = f.at(i, j);
    }
  }
  return inverse_transform(out);
}

SpectralField spectral_derivative(const SpectralField& f, int ax, int ay) {
  if (ax < 0 || ay < 0) throw ZklabError("spectral_derivative: negative order");
  SpectralField out(f.grid);
  const Grid2D& g = f.grid;
  const cplx rot = i_pow(ax + ay);
  for (int j = 0; j < g.ny; ++j) {
    const bool zero_y = (ay % 2 == 1) && g.mode_y(j) == -g.ny / 2;
    const double py = int_pow(g.ky(j), ay);
    for (int i = 0; i < g.nx; ++i) {
      const bool zero_x = (ax % 2 == 1) && g.mode_x(i) == -g.nx / 2;
      if (zero_x || zero_y) continue;
      const double scale = int_pow(g.kx(i), ax) * py;
      out.at(i, j) = rot * (scale * f.at(i, j));
    }
  }
  return out;
}

RealField derivative(const RealField& f, int ax, int ay) {
  return inverse_transform(spectral_derivative(forward_transform(f), ax, ay));
}

void dealias_in_place(SpectralField& f, double fraction) {
  if (!(fraction > 0.0) || fraction > 1.0) throw ZklabError("dealias: fraction must lie in (0, 1]");
  const Grid2D& g = f.grid;
  const double cx = fraction * g.nx / 2.0;
  const double cy = fraction * g.ny / 2.0;
  for (int j = 0; j < g.ny; ++j) {
    const bool cut_y = std::abs(g.mode_y(j)) > cy;
    for (int i = 0; i < g.nx; ++i) {
      if (cut_y || std::abs(g.mode_x(i)) > cx) f.at(i, j) = cplx(0.0, 0.0);
    }
  }
}

SpectralField dealias(const SpectralField& f, double fraction) {
  SpectralField out = f;
  dealias_in_place(out, fraction);
  return out;
}

double integrate(const RealField& f) {
  double s = 0.0;
  for (double v : f.values) s += v;
  return s * f.grid.dx() * f.grid.dy();
}

double inner(const RealField& a, const RealField& b) {
  require_same_grid(a.grid, b.grid, "inner");
  double s = 0.0;
  for (std::size_t n = 0; n < a.values.size(); ++n) s += a.values[n] * b.values[n];
  return s * a.grid.dx() * a.grid.dy();
}

double l2_norm(const RealField& f) { return std::sqrt(inner(f, f)); }

double coefficient_energy(const SpectralField& f) {
  double s = 0.0;
  for (const auto& c : f.coeffs) s += std::norm(c);
  return s * f.grid.Lx * f.grid.Ly;
}

SpectralInterpolant::SpectralInterpolant(const SpectralField& f) : coeffs_(f) {}
SpectralInterpolant::SpectralInterpolant(const RealField& f) : coeffs_(forward_transform(f)) {}

std::vector<cplx> SpectralInterpolant::row_basis(double x) const {
  const Grid2D& g = coeffs_.grid;
  std::vector<cplx> e(g.nx);
  const double u = x - g.x0;
  for (int i = 0; i < g.nx; ++i) {
    if (g.mode_x(i) == -g.nx / 2) {
      e[i] = cplx(std::cos(g.kx(i) * u), 0.0);
    } else {
      const double ph = g.kx(i) * u;
      e[i] = cplx(std::cos(ph), std::sin(ph));
    }
  }
  return e;
}

double SpectralInterpolant::operator()(double x, double y) const {
  return at({{x, y}}).front();
}

std::vector<double> SpectralInterpolant::at(const std::vector<std::pair<double, double>>& pts) const {
  const Grid2D& g = coeffs_.grid;
  std::vector<double> out;
  out.reserve(pts.size());
  std::vector<cplx> ey(g.ny);
  for (const auto& [x, y] : pts) {
    const auto ex = row_basis(x);
    const double v = y - g.y0;
    for (int j = 0; j < g.ny; ++j) {
      if (g.mode_y(j) == -g.ny / 2) {
        ey[j] = cplx(std::cos(g.ky(j) * v), 0.0);
      } else {
        const double ph = g.ky(j) * v;
        ey[j] = cplx(std::cos(ph), std::sin(ph));
      }
    }
    cplx acc(0.0, 0.0);
    for (int j = 0; j < g.ny; ++j) {
      cplx rowsum(0.0, 0.0);
      const cplx* c = &coeffs_.coeffs[g.index(0, j)];
      for (int i = 0; i < g.nx; ++i) rowsum += c[i] * ex[i];
      acc += rowsum * ey[j];
    }
    out.push_back(acc.real());
  }
  return out;
}

std::vector<double> SpectralInterpolant::on_tensor(const std::vector<double>& xs, const std::vector<double>& ys) const {
  const Grid2D& g = coeffs_.grid;
  const std::size_t nxs = xs.size();
  // partial[j][a] = sum_i c(i, j) e^{i kx x_a}
  std::vector<cplx> partial(static_cast<std::size_t>(g.ny) * nxs);
  for (std::size_t a = 0; a < nxs; ++a) {
    const auto ex = row_basis(xs[a]);
    for (int j = 0; j < g.ny; ++j) {
      cplx s(0.0, 0.0);
      const cplx* c = &coeffs_.coeffs[g.index(0, j)];
      for (int i = 0; i < g.nx; ++i) s += c[i] * ex[i];
      partial[static_cast<std::size_t>(j) * nxs + a] = s;
    }
  }
  std::vector<double> out(nxs * ys.size());
  for (std::size_t b = 0; b < ys.size(); ++b) {
    const double v = ys[b] - g.y0;
    for (int j = 0; j < g.ny; ++j) {
      cplx e;
      if (g.mode_y(j) == -g.ny / 2) {
        e = cplx(std::cos(g.ky(j) * v), 0.0);
      } else {
        e = cplx(std::cos(g.ky(j) * v), std::sin(g.ky(j) * v));
      }
      const cplx* p = &partial[static_cast<std::size_t>(j) * nxs];
      for (std::size_t a = 0; a < nxs; ++a) out[b * nxs + a] += (p[a] * e).real();
    }
  }
  return out;
}

}  // namespace zklab
