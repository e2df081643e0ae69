#pragma once

#include <utility>
#include <vector>

#include "zklab/grid.hpp"

namespace zklab {

// Throws on non-finite samples.
SpectralField forward_transform(const RealField& f);
// Real part of the inverse transform; imaginary residue is discarded.
RealField inverse_transform(const SpectralField& f);

// Multiplies by (i kx)^ax (i ky)^ay. Odd orders zero the Nyquist row/column.
SpectralField spectral_derivative(const SpectralField& f, int ax, int ay);
RealField derivative(const RealField& f, int ax, int ay);

// Keeps modes with |j| <= fraction*nx/2 and |k| <= fraction*ny/2.
SpectralField dealias(const SpectralField& f, double fraction);
void dealias_in_place(SpectralField& f, double fraction);

// dx*dy*sum(values).
double integrate(const RealField& f);
double l2_norm(const RealField& f);
double inner(const RealField& a, const RealField& b);
// Lx*Ly*sum|c|^2, equal to integrate(f^2) for the field the coefficients represent.
double coefficient_energy(const SpectralField& f);

// Trigonometric interpolation onto a grid `factor` times finer over the same
// box. The Nyquist modes are dropped.
RealField upsample(const SpectralField& f, int factor);

// Band-limited interpolation at arbitrary points. The Nyquist modes are
// evaluated as cosines so that real fields stay real off the grid.
class SpectralInterpolant {
 public:
  explicit SpectralInterpolant(const SpectralField& f);
  explicit SpectralInterpolant(const RealField& f);

  double operator()(double x, double y) const;
  std::vector<double> at(const std::vector<std::pair<double, double>>& pts) const;
  // Values on the tensor product xs x ys, x fastest.
  std::vector<double> on_tensor(const std::vector<double>& xs, const std::vector<double>& ys) const;

  const Grid2D& grid() const { return coeffs_.grid; }

 private:
  SpectralField coeffs_;
  std::vector<cplx> row_basis(double x) const;
};

}  // namespace zklab
