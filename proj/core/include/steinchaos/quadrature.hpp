#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "steinchaos/parallel.hpp"

namespace steinchaos {

enum class QuadratureKind { gauss_hermite, gauss_legendre, adaptive_gauss_kronrod };

const char* to_string(QuadratureKind kind);

/// A fixed rule sum_k w_k f(x_k). For the adaptive kind the nodes/weights are
/// the 15-point Kronrod rule on [-1, 1] that every subinterval uses.
struct QuadratureRule {
  QuadratureKind kind = QuadratureKind::gauss_legendre;
  std::vector<double> nodes;
  std::vector<double> weights;
  double target_abs_tol = 0.0;

  std::size_t size() const { return nodes.size(); }

  template <class F>
  double apply(F&& f) const {
    CompensatedSum acc;
    for (std::size_t k = 0; k < nodes.size(); ++k) acc.add(weights[k] * f(nodes[k]));
    return acc.value();
  }
};

inline constexpr std::size_t kMaxGaussHermiteNodes = 256;
inline constexpr std::size_t kMaxGaussLegendreNodes = 1024;

/// Gauss-Hermite rule for the standard normal weight: E f(Z) ~ sum w_k f(z_k).
/// Exact for polynomials of degree <= 2m - 1. Throws CapacityError unless 1 <= m <= 256.
QuadratureRule gauss_hermite_nodes(std::size_t m);

/// Gauss-Legendre rule on [a, b].
QuadratureRule gauss_legendre_nodes(std::size_t m, double a = -1.0, double b = 1.0);

/// The 15-point Kronrod rule used by integrate_adaptive().
QuadratureRule gauss_kronrod_rule();

struct IntegrationResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::size_t evaluations = 0;
  std::size_t intervals = 0;
  bool converged = false;
};

/**
 * Globally adaptive Gauss-Kronrod (G7/K15) integration of f over [a, b].
 * Either bound may be infinite; infinite ranges are mapped onto finite ones
 * with x = a + u/(1-u) style substitutions. Kronrod nodes are interior, so
 * integrable endpoint singularities are never evaluated.
 */
IntegrationResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                     double abs_tol = 1e-12, std::size_t max_intervals = 4000);

/// Same as integrate_adaptive() but throws AccuracyError when the tolerance is missed.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol = 1e-12, std::size_t max_intervals = 4000);

/// Integrates piecewise over consecutive breakpoints (sorted, possibly infinite at the ends).
double integrate_piecewise(const std::function<double(double)>& f,
                           const std::vector<double>& breakpoints, double abs_tol = 1e-12,
                           std::size_t max_intervals = 4000);

}  // namespace steinchaos
