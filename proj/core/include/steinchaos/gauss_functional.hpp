#pragma once

#include <cstddef>
#include <functional>
#include <string>

#include "steinchaos/bound_report.hpp"
#include "steinchaos/quadrature.hpp"
#include "steinchaos/random_stream.hpp"

namespace steinchaos {

/// W = psi(Z) for an absolutely continuous psi whose derivative grows at most polynomially.
class SmoothFunctional {
 public:
  using Fn = std::function<double(double)>;

  SmoothFunctional(std::string name, Fn eval, Fn deriv, unsigned growth_degree);

  /// psi(x) = x.
  static SmoothFunctional identity();
  /// psi(x) = (x^2 - 1) / sqrt(2n): one summand of a standardized chi^2_n.
  static SmoothFunctional chi2_term(unsigned n);
  /// "identity" or "chi2" (with n); ValidationError otherwise.
  static SmoothFunctional builtin(const std::string& name, unsigned n = 1);

  const std::string& name() const { return name_; }
  double operator()(double x) const { return eval_(x); }
  double deriv(double x) const { return deriv_(x); }
  /// psi' is bounded by C (1 + |x|^growth_degree).
  unsigned growth_degree() const { return growth_degree_; }

  /// E psi(Z) and Var psi(Z) by Gauss-Hermite with enough nodes for the growth degree.
  double mean() const;
  double variance() const;
  /// |E psi(Z)| <= tol and |Var psi(Z) - 1| <= tol.
  bool standardized(double tol = 1e-8) const;

 private:
  std::string name_;
  Fn eval_;
  Fn deriv_;
  unsigned growth_degree_;
};

/**
 * T(x) = int_0^1 E[psi'(x) psi'(u x + sqrt(1 - u^2) Z')] du, i.e. the t-integral
 * with weight (2 sqrt t)^{-1} after t = u^2. rule_t must live on [0, 1]
 * (Gauss-Legendre), rule_z is a Gauss-Hermite rule for Z'.
 */
double interp_T(const SmoothFunctional& psi, double x, const QuadratureRule& rule_t,
                const QuadratureRule& rule_z);

struct InterpolationRules {
  std::size_t t_nodes = 24;
  std::size_t z_nodes = 24;
  double stability_tol = 1e-8;
};

/// interp_T with the given node counts, re-run with both doubled; AccuracyError if they differ by more than stability_tol.
double interp_T_stable(const SmoothFunctional& psi, double x, const InterpolationRules& rules = {});

/// Var T(Z) for Z ~ N(0, 1), by Gauss-Hermite over stable T values.
double interp_T_variance(const SmoothFunctional& psi, const InterpolationRules& rules = {});

struct GaussBoundOptions {
  InterpolationRules rules;
  double outer_tol = 1e-10;
  std::size_t mc_samples = 20000;  ///< 0 disables the Monte Carlo cross-check
  unsigned threads = 0;
};

/**
 * theta * E|1 - T(Z)|. The outer expectation is an adaptive integral against
 * phi (|1 - T| has kinks, so a fixed Gauss-Hermite rule converges slowly);
 * a Monte Carlo estimate with its standard error rides along for cross-checking.
 * Requires psi standardized.
 */
BoundReport bound_theta_E1mT(const SmoothFunctional& psi, ThetaChoice theta,
                             const RandomStream& stream, const GaussBoundOptions& options = {});

struct Chi2Bounds {
  unsigned n = 0;
  double d_W = 0.0;
  double d_K = 0.0;
  double d_TV = 0.0;
  double var_T = 0.0;      ///< 2 / n
  double e_abs_dev = 0.0;  ///< E|1 - chi^2_n / n| in closed form
};

/// sqrt(2/pi) sqrt(2/n), sqrt(2/n) and 2 sqrt(2/n), from E|1 - T| <= sqrt(Var T).
Chi2Bounds chi2_bounds(unsigned n);

/// E|chi^2_n / n - 1| = 4 (n/2)^{n/2} e^{-n/2} / (n Gamma(n/2)).
double chi2_mean_abs_deviation(unsigned n);

}  // namespace steinchaos
