#pragma once

#include <vector>

namespace zklab {

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1], ascending
  std::vector<double> weights;
};

// n-point Gauss-Legendre rule; cached per n.
const GaussRule& gauss_legendre(int n);

// Nodes and weights of the n-point rule mapped to [a, b].
void gauss_on_interval(int n, double a, double b, std::vector<double>& x, std::vector<double>& w);

}  // namespace zklab
