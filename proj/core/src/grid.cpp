#include "zklab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace zklab {

namespace {

void check_points(int n, const char* name) {
  if (n < 8 || n % 2 != 0) {
    throw ZklabError(std::string("grid: ") + name + " must be even and >= 8, got " + std::to_string(n));
  }
}

void check_length(double L, const char* name) {
  if (!(L > 0.0) || !std::isfinite(L)) {
    throw ZklabError(std::string("grid: ") + name + " must be positive and finite");
  }
}

double wavenumber(int i, int n, double L) {
  const int m = i < n / 2 ? i : i - n;
  return 2.0 * std::numbers::pi * m / L;
}

}  // namespace

Grid2D Grid2D::centered(int nx, int ny, double Lx, double Ly) {
  Grid2D g{nx, ny, Lx, Ly, -0.5 * Lx, -0.5 * Ly};
  g.validate();
  return g;
}

void Grid2D::validate() const {
  check_points(nx, "nx");
  check_points(ny, "ny");
  check_length(Lx, "Lx");
  check_length(Ly, "Ly");
  if (!std::isfinite(x0) || !std::isfinite(y0)) throw ZklabError("grid: corner must be finite");
}

double Grid2D::kx(int i) const { return wavenumber(i, nx, Lx); }
double Grid2D::ky(int j) const { return wavenumber(j, ny, Ly); }

Grid2D Grid2D::refined(int factor) const {
  Grid2D g = *this;
  g.nx *= factor;
  g.ny *= factor;
  return g;
}

RealField::RealField(const Grid2D& g, std::vector<double> v) : grid(g), values(std::move(v)) {
  if (values.size() != grid.size()) throw ZklabError("RealField: value count does not match grid");
}

RealField RealField::from_function(const Grid2D& g, const std::function<double(double, double)>& f) {
  RealField out(g);
  for (int j = 0; j < g.ny; ++j) {
    const double y = g.y(j);
    for (int i = 0; i < g.nx; ++i) out.values[g.index(i, j)] = f(g.x(i), y);
  }
  return out;
}

bool RealField::all_finite() const {
  return std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); });
}

double RealField::max_abs() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

void require_same_grid(const Grid2D& a, const Grid2D& b, const char* what) {
  if (!(a == b)) throw ZklabError(std::string(what) + ": grid mismatch");
}

RealField operator+(const RealField& a, const RealField& b) {
  require_same_grid(a.grid, b.grid, "field sum");
  RealField out(a.grid);
  for (std::size_t n = 0; n < out.values.size(); ++n) out.values[n] = a.values[n] + b.values[n];
  return out;
}

RealField operator-(const RealField& a, const RealField& b) {
  require_same_grid(a.grid, b.grid, "field difference");
  RealField out(a.grid);
  for (std::size_t n = 0; n < out.values.size(); ++n) out.values[n] = a.values[n] - b.values[n];
  return out;
}

RealField operator*(double s, const RealField& a) {
  RealField out(a.grid);
  for (std::size_t n = 0; n < out.values.size(); ++n) out.values[n] = s * a.values[n];
  return out;
}

RealField pointwise_product(const RealField& a, const RealField& b) {
  require_same_grid(a.grid, b.grid, "field product");
  RealField out(a.grid);
  for (std::size_t n = 0; n < out.values.size(); ++n) out.values[n] = a.values[n] * b.values[n];
  return out;
}

void Grid3D::validate() const {
  check_points(nx, "nx");
  check_points(ny, "ny");
  check_points(nt, "nt");
  check_length(Lx, "Lx");
  check_length(Ly, "Ly");
  check_length(Lt, "Lt");
}

double Grid3D::kx(int i) const { return wavenumber(i, nx, Lx); }
double Grid3D::ky(int j) const { return wavenumber(j, ny, Ly); }
double Grid3D::kt(int k) const { return wavenumber(k, nt, Lt); }

Grid3D Grid3D::refined(int factor) const {
  Grid3D g = *this;
  g.nx *= factor;
  g.ny *= factor;
  g.nt *= factor;
  return g;
}

}  // namespace zklab
