#pragma once

#include <cstddef>
#include <vector>

namespace steinchaos {

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kSqrt2 = 1.414213562373095048801688724209698079;
inline constexpr double kSqrt2Pi = 2.506628274631000502415765284811045253;
inline constexpr double kInvSqrt2Pi = 0.398942280401432677939946059934381868;

/// Standard normal density phi(w).
double std_normal_pdf(double w);

/// Standard normal distribution function Phi(w). Throws DomainError for non-finite w.
double std_normal_cdf(double w);

/// Upper tail 1 - Phi(w), accurate in relative terms for large positive w.
double std_normal_sf(double w);

/// Inverse of Phi on (0, 1).
double std_normal_quantile(double p);

/// Mills ratio (1 - Phi(u)) / phi(u). Uses the asymptotic series past u = 37
/// where phi(u) underflows.
double mills_ratio(double u);

/**
 * Orthonormal Hermite functions
 *
 *   h_n(t) = (sqrt(pi) 2^n n!)^{-1/2} H_n(t) exp(-t^2/2),
 *
 * the eigenfunctions of A = -(d/dt)^2 + 1 + t^2 with eigenvalues 2n + 2.
 * Values come from the three-term recurrence on h_n itself, so nothing
 * overflows for n <= 200 and |t| <= 50 (the Gaussian factor underflows to
 * zero first).
 */
class HermiteBasis {
 public:
  static constexpr std::size_t kDefaultMaxIndex = 64;

  explicit HermiteBasis(std::size_t max_index = kDefaultMaxIndex);

  std::size_t max_index() const { return max_index_; }

  static double eigenvalue(std::size_t n) { return 2.0 * static_cast<double>(n) + 2.0; }

  /// h_n(t); throws CapacityError for n > max_index().
  double function(std::size_t n, double t) const;

  /// h_0(t), ..., h_J(t) with J = max_index().
  std::vector<double> evaluate_all(double t) const;

 private:
  std::size_t max_index_;
};

}  // namespace steinchaos
