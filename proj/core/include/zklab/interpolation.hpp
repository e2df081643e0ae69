#pragma once

#include <cstdint>
#include <vector>

#include "zklab/grid.hpp"

namespace zklab {

enum class InterpLemma {
  L26,  // J^{s(1-theta)} against e^{(theta a/2)|x+y|^{3/2}}
  L27,  // J^{theta s} against (1+|x+y|)^a
  LB1,  // J^{theta s} against e^{beta(x+y)}
};

const char* interp_lemma_name(InterpLemma l);

struct InterpReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  double edge_fraction = 0.0;  // weighted mass within two cells of the edge
  bool conclusive = true;
};

// LHS and the product on the right of the selected inequality, both as L2
// norms of spectrally evaluated fields. Parameters are checked against each
// lemma's stated ranges.
InterpReport interp_check(InterpLemma lemma, const RealField& f, double s, double a_or_beta, double theta);

struct GaussianBump {
  double amplitude;
  double cx;
  double cy;
  double width;
};

struct GaussianMixture {
  std::vector<GaussianBump> bumps;
  double operator()(double x, double y) const;
};

// Deterministic corpus of mixtures with 1 to 3 bumps centred in [-3, 3]^2.
std::vector<GaussianMixture> mixture_corpus(int count, std::uint64_t seed);

}  // namespace zklab
