#include "zklab/interpolation.hpp"

#include <cmath>
#include <random>

#include "zklab/spectral.hpp"
#include "zklab/weights.hpp"

namespace zklab {

namespace {

RealField weighted(const RealField& f, double (*lw)(double z, double p), double p) {
  RealField out(f.grid);
  const Grid2D& g = f.grid;
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) out.at(i, j) = std::exp(lw(g.x(i) + g.y(j), p)) * f.at(i, j);
  }
  return out;
}

double exp_three_halves(double z, double c) { return c * std::pow(std::abs(z), 1.5); }
double poly_log(double z, double e) { return e * std::log1p(std::abs(z)); }
double linear(double z, double b) { return b * z; }

double edge_share(const RealField& w) {
  const Grid2D& g = w.grid;
  double edge = 0.0, total = 0.0;
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const double v = w.at(i, j) * w.at(i, j);
      total += v;
      if (i < 2 || j < 2 || i >= g.nx - 2 || j >= g.ny - 2) edge += v;
    }
  }
  return total > 0.0 ? edge / total : 0.0;
}

}  // namespace

const char* interp_lemma_name(InterpLemma l) {
  switch (l) {
    case InterpLemma::L26: return "L26";
    case InterpLemma::L27: return "L27";
    case InterpLemma::LB1: return "LB1";
  }
  return "unknown";
}

InterpReport interp_check(InterpLemma lemma, const RealField& f, double s, double a_or_beta, double theta) {
  if (!(s > 0.0)) throw ZklabError("interp_check: s must be positive");
  if (!(a_or_beta > 0.0)) throw ZklabError("interp_check: weight parameter must be positive");
  if (lemma == InterpLemma::L27) {
    if (!(theta > 0.0 && theta < 1.0)) throw ZklabError("interp_check: L27 needs theta in (0, 1)");
  } else if (!(theta >= 0.0 && theta <= 1.0)) {
    throw ZklabError("interp_check: theta must lie in [0, 1]");
  }
  const double js = l2_norm(apply_Js(f, s));
  InterpReport rep;
  RealField heavy;
  switch (lemma) {
    case InterpLemma::L26: {
      const RealField wf = weighted(f, exp_three_halves, 0.5 * theta * a_or_beta);
      rep.lhs = l2_norm(apply_Js(wf, s * (1.0 - theta)));
      rep.rhs = std::pow(js, 1.0 - theta) * std::pow(l2_norm(wf), theta);
      heavy = wf;
      break;
    }
    case InterpLemma::L27: {
      const RealField lf = weighted(f, poly_log, (1.0 - theta) * a_or_beta);
      const RealField rf = weighted(f, poly_log, a_or_beta);
      rep.lhs = l2_norm(apply_Js(lf, theta * s));
      rep.rhs = std::pow(js, theta) * std::pow(l2_norm(rf), 1.0 - theta);
      heavy = rf;
      break;
    }
    case InterpLemma::LB1: {
      const RealField lf = weighted(f, linear, (1.0 - theta) * a_or_beta);
      const RealField rf = weighted(f, linear, a_or_beta);
      rep.lhs = l2_norm(apply_Js(lf, theta * s));
      rep.rhs = std::pow(js, theta) * std::pow(l2_norm(rf), 1.0 - theta);
      heavy = rf;
      break;
    }
  }
  rep.edge_fraction = edge_share(heavy);
  rep.conclusive = rep.edge_fraction <= 1e-8;
  rep.ratio = rep.rhs > 0.0 ? rep.lhs / rep.rhs : 0.0;
  return rep;
}

double GaussianMixture::operator()(double x, double y) const {
  double v = 0.0;
  for (const auto& b : bumps) {
    const double dx = x - b.cx;
    const double dy = y - b.cy;
    v += b.amplitude * std::exp(-(dx * dx + dy * dy) / (2.0 * b.width * b.width));
  }
  return v;
}

std::vector<GaussianMixture> mixture_corpus(int count, std::uint64_t seed) {
  if (count < 0) throw ZklabError("mixture_corpus: count must be >= 0");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> n_bumps(1, 3);
  std::uniform_real_distribution<double> centre(-3.0, 3.0);
  std::uniform_real_distribution<double> width(0.7, 1.5);
  std::uniform_real_distribution<double> amp(0.5, 1.0);
  std::bernoulli_distribution sign(0.5);
  std::vector<GaussianMixture> out(count);
  for (auto& m : out) {
    const int k = n_bumps(rng);
    for (int b = 0; b < k; ++b) {
      const double a = amp(rng);
      const double cx = centre(rng);
      const double cy = centre(rng);
      const double w = width(rng);
      m.bumps.push_back({sign(rng) ? a : -a, cx, cy, w});
    }
  }
  return out;
}

}  // namespace zklab
