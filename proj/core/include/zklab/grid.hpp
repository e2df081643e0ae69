#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

namespace zklab {

using cplx = std::complex<double>;

class ZklabError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Uniform periodic sampling of a rectangle. Samples are stored with x varying
// fastest: index(i, j) = j * nx + i.
struct Grid2D {
  int nx = 0;
  int ny = 0;
  double Lx = 0.0;
  double Ly = 0.0;
  double x0 = 0.0;
  double y0 = 0.0;

  // Square-ish box [-Lx/2, Lx/2) x [-Ly/2, Ly/2).
  static Grid2D centered(int nx, int ny, double Lx, double Ly);
  static Grid2D centered(int n, double L) { return centered(n, n, L, L); }

  void validate() const;

  double dx() const { return Lx / nx; }
  double dy() const { return Ly / ny; }
  double x(int i) const { return x0 + i * dx(); }
  double y(int j) const { return y0 + j * dy(); }
  std::size_t size() const { return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny); }
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * nx + i; }

  // Signed mode index in [-n/2, n/2).
  int mode_x(int i) const { return i < nx / 2 ? i : i - nx; }
  int mode_y(int j) const { return j < ny / 2 ? j : j - ny; }
  double kx(int i) const;
  double ky(int j) const;

  Grid2D refined(int factor) const;
  bool operator==(const Grid2D&) const = default;
};

struct RealField {
  Grid2D grid;
  std::vector<double> values;

  RealField() = default;
  explicit RealField(const Grid2D& g) : grid(g), values(g.size(), 0.0) {}
  RealField(const Grid2D& g, std::vector<double> v);

  static RealField from_function(const Grid2D& g, const std::function<double(double, double)>& f);

  double& at(int i, int j) { return values[grid.index(i, j)]; }
  double at(int i, int j) const { return values[grid.index(i, j)]; }
  bool all_finite() const;
  double max_abs() const;
};

// Discrete Fourier coefficients, normalised so that
// f(x_i, y_j) = sum_k c_k exp(i kx (x_i - x0) + i ky (y_j - y0)).
struct SpectralField {
  Grid2D grid;
  std::vector<cplx> coeffs;

  SpectralField() = default;
  explicit SpectralField(const Grid2D& g) : grid(g), coeffs(g.size(), cplx(0.0, 0.0)) {}

  cplx& at(int i, int j) { return coeffs[grid.index(i, j)]; }
  const cplx& at(int i, int j) const { return coeffs[grid.index(i, j)]; }
};

RealField operator+(const RealField& a, const RealField& b);
RealField operator-(const RealField& a, const RealField& b);
RealField operator*(double s, const RealField& a);
RealField pointwise_product(const RealField& a, const RealField& b);
void require_same_grid(const Grid2D& a, const Grid2D& b, const char* what);

// Periodic box in (x, y, t) for the space-time multiplier experiments.
struct Grid3D {
  int nx = 0;
  int ny = 0;
  int nt = 0;
  double Lx = 0.0;
  double Ly = 0.0;
  double Lt = 0.0;

  void validate() const;
  double dx() const { return Lx / nx; }
  double dy() const { return Ly / ny; }
  double dt() const { return Lt / nt; }
  double x(int i) const { return -0.5 * Lx + i * dx(); }
  double y(int j) const { return -0.5 * Ly + j * dy(); }
  double t(int k) const { return -0.5 * Lt + k * dt(); }
  std::size_t size() const {
    return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny) * static_cast<std::size_t>(nt);
  }
  // x fastest, then y, then t.
  std::size_t index(int i, int j, int k) const {
    return (static_cast<std::size_t>(k) * ny + j) * nx + i;
  }
  double kx(int i) const;
  double ky(int j) const;
  double kt(int k) const;
  Grid3D refined(int factor) const;
};

}  // namespace zklab
