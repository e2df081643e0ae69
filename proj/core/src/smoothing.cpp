#include "zklab/smoothing.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "zklab/fft.hpp"

namespace zklab {

namespace {

constexpr double kSingular = 1e-10;
const cplx I(0.0, 1.0);

using SliceAxis = int;  // 0: x, 1: y, 2: t

std::vector<cplx> to_spectrum(const Field3D& f) {
  const Grid3D& g = f.grid;
  std::vector<cplx> buf(g.size());
  for (std::size_t n = 0; n < buf.size(); ++n) buf[n] = f.data[n];
  fft::forward_3d(g.nx, g.ny, g.nt, buf.data(), buf.data());
  return buf;
}

Field3D from_spectrum(const Grid3D& g, std::vector<cplx>& buf) {
  fft::backward_3d(g.nx, g.ny, g.nt, buf.data(), buf.data());
  Field3D out{g, std::vector<double>(g.size())};
  const double scale = 1.0 / static_cast<double>(g.size());
  for (std::size_t n = 0; n < buf.size(); ++n) out.data[n] = buf[n].real() * scale;
  return out;
}

// Slice norms ||f(slice)||_{L2} along the chosen axis, Riemann sums.
std::vector<double> slice_norms(const Field3D& f, SliceAxis axis) {
  const Grid3D& g = f.grid;
  const int ns = axis == 0 ? g.nx : axis == 1 ? g.ny : g.nt;
  std::vector<double> s(ns, 0.0);
  for (int k = 0; k < g.nt; ++k)
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) s[axis == 0 ? i : axis == 1 ? j : k] += f.at(i, j, k) * f.at(i, j, k);
  const double cell = axis == 0 ? g.dy() * g.dt() : axis == 1 ? g.dx() * g.dt() : g.dx() * g.dy();
  for (double& v : s) v = std::sqrt(v * cell);
  return s;
}

// (e^z - 1) / z and (e^z (z - 1) + 1) / z^2.
std::pair<cplx, cplx> phi_functions(cplx z) {
  if (std::abs(z) < 0.1) {
    cplx p1 = 0.0, p2 = 0.0, term = 1.0;
    for (int n = 0; n < 12; ++n) {
      // term = z^n / n!
      p1 += term / static_cast<double>(n + 1);
      p2 += term / static_cast<double>(n + 2);
      term *= z / static_cast<double>(n + 1);
    }
    return {p1, p2};
  }
  const cplx e = std::exp(z);
  return {(e - 1.0) / z, (e * (z - 1.0) + 1.0) / (z * z)};
}

// y(x) = int K(x - z) u(z) dz with K(x) = e^{i zeta x} on x > 0 (Im zeta > 0)
// or -e^{i zeta x} on x < 0 (Im zeta < 0), u piecewise linear between nodes.
void exponential_convolution(cplx zeta, double step, const std::vector<cplx>& u, cplx coef, std::vector<cplx>& out) {
  const int n = static_cast<int>(u.size());
  const bool causal = zeta.imag() > 0.0;
  const cplx mu = I * (causal ? zeta : -zeta);
  const cplx z = mu * step;
  const cplx E = std::exp(z);
  const auto [p1, p2] = phi_functions(z);
  const cplx w_near = step * (p1 - p2);  // weight of the newer node
  const cplx w_far = step * p2;          // weight of the older node
  const cplx sign = causal ? coef : -coef;
  cplx y = 0.0;
  if (causal) {
    for (int q = 1; q < n; ++q) {
      y = E * y + w_far * u[q - 1] + w_near * u[q];
      out[q] += sign * y;
    }
  } else {
    for (int q = n - 2; q >= 0; --q) {
      y = E * y + w_far * u[q + 1] + w_near * u[q];
      out[q] += sign * y;
    }
  }
}

struct Pole {
  cplx coef;  // symbol = sum coef / (i (s - zeta)) in the slicing frequency s
  cplx zeta;
};

// Poles of m_{k,l} in the slicing frequency, for fixed other frequencies.
// Returns false on a (near) multiple or real pole.
bool symbol_poles(const MultiplierSymbol& sym, SliceAxis axis, double f1, double f2, std::vector<Pole>& poles) {
  poles.clear();
  if (axis == 2) {
    // f1 = xi, f2 = eta; m = p^k q^l / (i tau + c)
    const cplx p = I * f1 - sym.lambda, q = I * f2 - sym.beta;
    cplx num = 1.0;
    for (int r = 0; r < sym.k; ++r) num *= p;
    for (int r = 0; r < sym.l; ++r) num *= q;
    const cplx c = p * p * p + q * q * q;
    const cplx zeta = I * c;
    if (std::abs(zeta.imag()) < kSingular) return false;
    poles.push_back({num, zeta});
    return true;
  }
  // Slicing in a space variable: the sliced factor runs over the cube roots of
  // -(i tau + other^3). f1 is the other space frequency, f2 = tau.
  const bool along_x = axis == 0;
  const double shift = along_x ? sym.lambda : sym.beta;
  const cplx other = I * f1 - (along_x ? sym.beta : sym.lambda);
  const int k_slice = along_x ? sym.k : sym.l;
  const int k_other = along_x ? sym.l : sym.k;
  const cplx c = -(I * f2 + other * other * other);
  if (std::abs(c) < kSingular) return false;
  cplx other_pow = 1.0;
  for (int r = 0; r < k_other; ++r) other_pow *= other;
  const cplx r0 = std::pow(c, 1.0 / 3.0);
  const cplx rot = std::polar(1.0, 2.0 * std::numbers::pi / 3.0);
  cplx pj = r0;
  for (int j = 0; j < 3; ++j, pj *= rot) {
    cplx pk = 1.0;
    for (int r = 0; r < k_slice; ++r) pk *= pj;
    const cplx zeta = -I * (pj + shift);
    if (std::abs(zeta.imag()) < kSingular) return false;
    poles.push_back({other_pow * pk / (3.0 * pj * pj), zeta});
  }
  return true;
}

struct SliceOutput {
  std::vector<double> norms;  // L2 norm of the output on each slice
  int skipped = 0;
};

// Exact one-sided kernels along the slicing axis, discrete Fourier lattice on
// the other two. Slice norms follow from Parseval.
SliceOutput sliced_multiplier(const Field3D& h, const MultiplierSymbol& sym, SliceAxis axis) {
  const Grid3D& g = h.grid;
  const int ns = axis == 0 ? g.nx : axis == 1 ? g.ny : g.nt;
  const int n1 = axis == 0 ? g.ny : g.nx;
  const int n2 = axis == 2 ? g.ny : g.nt;
  const double step = axis == 0 ? g.dx() : axis == 1 ? g.dy() : g.dt();
  const double cell = axis == 0 ? g.dy() * g.dt() : axis == 1 ? g.dx() * g.dt() : g.dx() * g.dy();
  auto sample = [&](int q, int a, int b) {
    return axis == 0 ? h.at(q, a, b) : axis == 1 ? h.at(a, q, b) : h.at(a, b, q);
  };
  auto freq1 = [&](int a) { return axis == 0 ? g.ky(a) : g.kx(a); };
  auto freq2 = [&](int b) { return axis == 2 ? g.ky(b) : g.kt(b); };
  // spec[q][m] : transform of slice q at lattice mode m (first index fastest).
  std::vector<std::vector<cplx>> spec(ns, std::vector<cplx>(static_cast<std::size_t>(n1) * n2));
  for (int q = 0; q < ns; ++q) {
    auto& buf = spec[q];
    for (int b = 0; b < n2; ++b)
      for (int a = 0; a < n1; ++a)
        buf[static_cast<std::size_t>(b) * n1 + a] = sample(q, a, b);
    fft::forward_2d(n1, n2, buf.data(), buf.data());
  }
  SliceOutput res;
  res.norms.assign(ns, 0.0);
  std::vector<cplx> line(ns), acc(ns);
  std::vector<Pole> poles;
  for (int b = 0; b < n2; ++b) {
    const double f2 = freq2(b);
    for (int a = 0; a < n1; ++a) {
      const double f1 = freq1(a);
      if (!symbol_poles(sym, axis, f1, f2, poles)) {
        ++res.skipped;
        continue;
      }
      const std::size_t m = static_cast<std::size_t>(b) * n1 + a;
      for (int q = 0; q < ns; ++q) line[q] = spec[q][m];
      std::fill(acc.begin(), acc.end(), cplx(0.0));
      for (const Pole& p : poles) exponential_convolution(p.zeta, step, line, p.coef, acc);
      for (int q = 0; q < ns; ++q) res.norms[q] += std::norm(acc[q]);
    }
  }
  const double scale = cell / (static_cast<double>(n1) * n2);
  for (double& v : res.norms) v = std::sqrt(v * scale);
  return res;
}

struct SingleRun {
  double sup = 0.0, l1 = 0.0, edge = 0.0;
  int skipped = 0;
};

SingleRun bound_once(const std::function<double(double, double, double)>& h, const Grid3D& grid,
                     const MultiplierSymbol& sym, SliceAxis axis) {
  const Field3D f = Field3D::from_function(grid, h);
  const SliceOutput out = sliced_multiplier(f, sym, axis);
  const auto in_norms = slice_norms(f, axis);
  const double step = axis == 0 ? grid.dx() : axis == 1 ? grid.dy() : grid.dt();
  SingleRun r;
  r.skipped = out.skipped;
  for (double v : in_norms) r.l1 += v * step;
  r.sup = *std::max_element(out.norms.begin(), out.norms.end());
  const int n = static_cast<int>(out.norms.size());
  const int band = std::max(1, n / 16);
  double total = 0.0, edge = 0.0;
  for (int q = 0; q < n; ++q) {
    const double e = out.norms[q] * out.norms[q];
    total += e;
    if (q < band || q >= n - band) edge += e;
  }
  r.edge = total > 0.0 ? edge / total : 0.0;
  return r;
}

BoundReport bound_check(const std::function<double(double, double, double)>& h, const Grid3D& grid,
                        const MultiplierSymbol& sym, SliceAxis axis) {
  grid.validate();
  sym.validate();
  if (grid.nx % 2 || grid.ny % 2 || grid.nt % 2) throw ZklabError("bound check: grid sizes must be even");
  const SingleRun coarse = bound_once(h, grid, sym, axis);
  const SingleRun fine = bound_once(h, grid.refined(2), sym, axis);
  // Same spacing on a box half again as large exposes wrap-around.
  Grid3D wide = grid;
  wide.nx = grid.nx * 3 / 2;
  wide.ny = grid.ny * 3 / 2;
  wide.nt = grid.nt * 3 / 2;
  wide.Lx = grid.Lx * 1.5;
  wide.Ly = grid.Ly * 1.5;
  wide.Lt = grid.Lt * 1.5;
  const SingleRun large = bound_once(h, wide, sym, axis);
  BoundReport rep;
  rep.sup_norm = coarse.sup;
  rep.l1_norm = coarse.l1;
  rep.skipped_nodes = coarse.skipped;
  rep.edge_fraction = coarse.edge;
  if (coarse.l1 <= 0.0) {
    rep.holds = true;
    return rep;
  }
  rep.ratio = coarse.sup / coarse.l1;
  auto rel = [&](const SingleRun& r) {
    const double q = r.l1 > 0.0 ? r.sup / r.l1 : 0.0;
    return q > 0.0 ? std::abs(q - rep.ratio) / q : 0.0;
  };
  rep.eps_resolution = rel(fine);
  rep.eps_domain = rel(large);
  rep.eps = std::max(rep.eps_resolution, rep.eps_domain);
  rep.conclusive = rep.eps_domain <= 0.05;
  rep.holds = rep.eps <= 0.05 && rep.ratio <= 1.0 + rep.eps;
  return rep;
}

}  // namespace

void MultiplierSymbol::validate() const {
  if (lambda == 0.0 && beta == 0.0) throw ZklabError("MultiplierSymbol: (lambda, beta) must not both vanish");
  if (k < 0 || l < 0 || k + l > 2) throw ZklabError("MultiplierSymbol: need k, l >= 0 and k + l <= 2");
}

cplx MultiplierSymbol::denominator(double xi, double eta, double tau) const {
  const cplx p = I * xi - lambda;
  const cplx q = I * eta - beta;
  return I * tau + p * p * p + q * q * q;
}

cplx MultiplierSymbol::operator()(double xi, double eta, double tau) const {
  cplx num = 1.0;
  for (int r = 0; r < k; ++r) num *= I * xi - lambda;
  for (int r = 0; r < l; ++r) num *= I * eta - beta;
  return num / denominator(xi, eta, tau);
}

M0Value m0_eval(double xi, double eta, double tau, double lambda, double beta) {
  if (lambda == 0.0 && beta == 0.0) throw ZklabError("m0_eval: (lambda, beta) must not both vanish");
  M0Value v;
  v.a = -xi * xi * xi + 3.0 * xi * lambda * lambda - eta * eta * eta + 3.0 * eta * beta * beta;
  v.b = lambda * lambda * lambda - 3.0 * xi * xi * lambda + beta * beta * beta - 3.0 * eta * eta * beta;
  const cplx den = MultiplierSymbol{lambda, beta, 0, 0}.denominator(xi, eta, tau);
  if (v.b == 0.0 && tau + v.a == 0.0) {
    v.singular = true;
    return v;
  }
  v.product_form = 1.0 / den;
  v.real_form = -I / cplx(tau + v.a, v.b);
  return v;
}

cplx PartialFractions::evaluate(double xi) const {
  cplx s = 0.0;
  for (const auto& p : poles) s += -I / cplx(xi + p.a, p.b);
  return s / 3.0;
}

PartialFractions partial_fractions_m20(double eta, double tau, double lambda, double beta) {
  const cplx w(eta, beta);
  const cplx c = tau - w * w * w;
  PartialFractions pf;
  const cplx r0 = std::abs(c) == 0.0 ? cplx(0.0) : std::pow(c, 1.0 / 3.0);
  const cplx rot = std::polar(1.0, 2.0 * std::numbers::pi / 3.0);
  cplx v = r0;
  for (auto& p : pf.poles) {
    p.root = v;
    p.a = -v.real();
    p.b = lambda - v.imag();
    v *= rot;
  }
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      if (std::abs(pf.poles[i].root - pf.poles[j].root) < 1e-8) pf.ill_conditioned = true;
  return pf;
}

cplx m20_direct(double xi, double eta, double tau, double lambda, double beta) {
  const cplx v(xi, lambda), w(eta, beta);
  return -I * v * v / (v * v * v + w * w * w - tau);
}

Field3D Field3D::from_function(const Grid3D& g, const std::function<double(double, double, double)>& f) {
  g.validate();
  Field3D out{g, std::vector<double>(g.size())};
  for (int k = 0; k < g.nt; ++k)
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) out.data[g.index(i, j, k)] = f(g.x(i), g.y(j), g.t(k));
  return out;
}

double Field3D::l2_norm() const {
  double s = 0.0;
  for (double v : data) s += v * v;
  return std::sqrt(s * grid.dx() * grid.dy() * grid.dt());
}

T0Result apply_T0(const Field3D& h, const MultiplierSymbol& sym) {
  sym.validate();
  const Grid3D& g = h.grid;
  auto buf = to_spectrum(h);
  T0Result res;
  for (int k = 0; k < g.nt; ++k) {
    const double tau = g.kt(k);
    for (int j = 0; j < g.ny; ++j) {
      const double eta = g.ky(j);
      for (int i = 0; i < g.nx; ++i) {
        const double xi = g.kx(i);
        cplx& c = buf[g.index(i, j, k)];
        if (std::abs(sym.denominator(xi, eta, tau)) < kSingular) {
          c = 0.0;
          ++res.skipped_nodes;
          continue;
        }
        c *= sym(xi, eta, tau);
      }
    }
  }
  res.field = from_spectrum(g, buf);
  return res;
}

Field3D apply_H(const Field3D& f, double lambda, double beta) {
  const Grid3D& g = f.grid;
  const MultiplierSymbol sym{lambda, beta, 0, 0};
  auto buf = to_spectrum(f);
  for (int k = 0; k < g.nt; ++k)
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) buf[g.index(i, j, k)] *= sym.denominator(g.kx(i), g.ky(j), g.kt(k));
  return from_spectrum(g, buf);
}

double support_edge_fraction(const Field3D& h) {
  const Grid3D& g = h.grid;
  double total = 0.0, ex = 0.0, ey = 0.0, et = 0.0;
  auto outer = [](int q, int n) { return q < n / 8 || q >= n - n / 8; };
  for (int k = 0; k < g.nt; ++k)
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        const double e = h.at(i, j, k) * h.at(i, j, k);
        total += e;
        if (outer(i, g.nx)) ex += e;
        if (outer(j, g.ny)) ey += e;
        if (outer(k, g.nt)) et += e;
      }
  if (total == 0.0) return 0.0;
  return std::max({ex, ey, et}) / total;
}

BoundReport check_bound_62(const std::function<double(double, double, double)>& h, const Grid3D& grid,
                           double lambda, double beta) {
  return bound_check(h, grid, MultiplierSymbol{lambda, beta, 0, 0}, 2);
}

BoundReport check_bound_A4(const std::function<double(double, double, double)>& h, const Grid3D& grid,
                           double lambda, double beta, int k, int l) {
  if (lambda < 1.0 || beta < 1.0) throw ZklabError("check_bound_A4: needs lambda >= 1 and beta >= 1");
  return bound_check(h, grid, MultiplierSymbol{lambda, beta, k, l}, l > k ? 1 : 0);
}

double Bump3D::operator()(double x, double y, double t) const {
  const double u = (x - cx) / wx, v = (y - cy) / wy, s = (t - ct) / wt;
  return amplitude * std::exp(-(u * u + v * v + s * s));
}

std::vector<Bump3D> smoothing_corpus(int count, std::uint64_t seed, const Grid3D& grid) {
  if (count < 0) throw ZklabError("smoothing_corpus: negative count");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Bump3D> out;
  out.reserve(count);
  const double sx = 0.0625 * grid.Lx, sy = 0.0625 * grid.Ly, st = 0.0625 * grid.Lt;
  for (int n = 0; n < count; ++n) {
    Bump3D b;
    b.amplitude = (unit(rng) < 0.5 ? -1.0 : 1.0) * (0.5 + unit(rng));
    b.cx = sx * (2.0 * unit(rng) - 1.0);
    b.cy = sy * (2.0 * unit(rng) - 1.0);
    b.ct = st * (2.0 * unit(rng) - 1.0);
    b.wx = 0.6 + 0.6 * unit(rng);
    b.wy = 0.6 + 0.6 * unit(rng);
    b.wt = 0.6 + 0.6 * unit(rng);
    out.push_back(b);
  }
  return out;
}

}  // namespace zklab
