#pragma once

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "steinchaos/chaos_algebra.hpp"
#include "steinchaos/quadrature.hpp"

namespace chaos_test {

using steinchaos::ChaosFunctional;
using steinchaos::CoeffVector;
using steinchaos::MultiIndex;

/// Random functional on coordinates 0..dims-1 with total order <= max_order.
inline ChaosFunctional random_functional(std::mt19937_64& rng, std::uint32_t dims, std::uint32_t max_order,
                                         std::size_t terms, bool centered = false) {
  std::uniform_int_distribution<std::uint32_t> mult(0, max_order);
  std::normal_distribution<double> coeff;
  ChaosFunctional phi;
  for (std::size_t t = 0; t < terms; ++t) {
    std::vector<MultiIndex::Entry> e;
    std::uint32_t budget = max_order;
    for (std::uint32_t j = 0; j < dims && budget > 0; ++j) {
      const std::uint32_t m = std::min(mult(rng), budget) / (j == 0 ? 1 : 2);
      budget -= m;
      e.emplace_back(j, m);
    }
    const MultiIndex alpha(e);
    if (centered && alpha.empty()) continue;
    phi.add_term(alpha, coeff(rng));
  }
  return phi;
}

/// E f(xi_0..xi_{dims-1}) on a tensor Gauss-Hermite grid.
inline double gh_expectation(const std::function<double(const CoeffVector&)>& f, std::uint32_t dims,
                             std::size_t nodes = 16) {
  const auto rule = steinchaos::gauss_hermite_nodes(nodes);
  std::vector<std::size_t> idx(dims, 0);
  double total = 0.0;
  for (;;) {
    CoeffVector x;
    double w = 1.0;
    for (std::uint32_t j = 0; j < dims; ++j) {
      x.set(j, rule.nodes[idx[j]]);
      w *= rule.weights[idx[j]];
    }
    total += w * f(x);
    std::uint32_t j = 0;
    while (j < dims && ++idx[j] == nodes) idx[j++] = 0;
    if (j == dims) break;
  }
  return total;
}

/// Explicit probabilists' Hermite polynomials He_0..He_6 divided by sqrt(k!).
inline double he_normalized(std::uint32_t k, double x) {
  const double x2 = x * x;
  switch (k) {
    case 0: return 1.0;
    case 1: return x;
    case 2: return (x2 - 1.0) / std::sqrt(2.0);
    case 3: return (x2 * x - 3.0 * x) / std::sqrt(6.0);
    case 4: return (x2 * x2 - 6.0 * x2 + 3.0) / std::sqrt(24.0);
    case 5: return (x2 * x2 * x - 10.0 * x2 * x + 15.0 * x) / std::sqrt(120.0);
    case 6: return (x2 * x2 * x2 - 15.0 * x2 * x2 + 45.0 * x2 - 15.0) / std::sqrt(720.0);
    default: return NAN;
  }
}

/// phi(x) from the explicit polynomials (orders <= 6 per coordinate).
inline double evaluate_explicit(const ChaosFunctional& phi, const CoeffVector& x) {
  double s = 0.0;
  for (const auto& [alpha, c] : phi.terms()) {
    double p = c;
    for (const auto& [j, m] : alpha.entries()) p *= he_normalized(m, x.get(j));
    s += p;
  }
  return s;
}

}  // namespace chaos_test
