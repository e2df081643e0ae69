#include "zklab/quadrature.hpp"

#include <boost/math/special_functions/legendre.hpp>

#include <algorithm>
#include <map>
#include <mutex>

#include "zklab/grid.hpp"

namespace zklab {

const GaussRule& gauss_legendre(int n) {
  static std::mutex mutex;
  static std::map<int, GaussRule> rules;
  if (n < 1) throw ZklabError("gauss_legendre: n must be positive");
  std::lock_guard<std::mutex> lock(mutex);
  auto it = rules.find(n);
  if (it != rules.end()) return it->second;

  // Boost returns the non-negative zeros in ascending order.
  const auto zeros = boost::math::legendre_p_zeros<double>(n);
  GaussRule rule;
  for (double z : zeros) {
    const double dp = boost::math::legendre_p_prime(n, z);
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    rule.nodes.push_back(z);
    rule.weights.push_back(w);
    if (z != 0.0) {
      rule.nodes.push_back(-z);
      rule.weights.push_back(w);
    }
  }
  std::vector<std::size_t> order(rule.nodes.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return rule.nodes[a] < rule.nodes[b]; });
  GaussRule sorted;
  for (std::size_t k : order) {
    sorted.nodes.push_back(rule.nodes[k]);
    sorted.weights.push_back(rule.weights[k]);
  }
  return rules.emplace(n, std::move(sorted)).first->second;
}

void gauss_on_interval(int n, double a, double b, std::vector<double>& x, std::vector<double>& w) {
  const GaussRule& r = gauss_legendre(n);
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  x.resize(r.nodes.size());
  w.resize(r.nodes.size());
  for (std::size_t k = 0; k < r.nodes.size(); ++k) {
    x[k] = mid + half * r.nodes[k];
    w[k] = half * r.weights[k];
  }
}

}  // namespace zklab
