#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "steinchaos/bound_report.hpp"
#include "steinchaos/chaos_algebra.hpp"
#include "steinchaos/random_stream.hpp"

namespace steinchaos {

/// Gamma = sum_j (a_j N^{-1} phi)(a_j phi); needs E[phi] = 0.
ChaosFunctional carre_functional(const ChaosFunctional& phi);

struct ChaosBoundOptions {
  /// Rescale phi to unit variance instead of rejecting it.
  bool normalize = false;
  double center_tol = 1e-12;
  double variance_tol = 1e-10;
  /// Largest number of active coordinates of Gamma evaluated by quadrature.
  std::size_t quadrature_max_coords = 2;
  double quadrature_tol = 1e-10;
  unsigned threads = 0;
  /// Bootstrap replicates for the empirical distance error.
  std::size_t bootstrap_replicates = 30;
  bool assert_mode = false;
};

/// E|1 - Gamma| by adaptive quadrature against the Gaussian density (1 or 2 coordinates).
double e_abs_dev_quadrature(const ChaosFunctional& gamma, double tol = 1e-10);

struct MonteCarloEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;
};

/// Sample mean of |1 - Gamma|; draw s reads coordinate k at stream index s * active + k.
MonteCarloEstimate e_abs_dev_monte_carlo(const ChaosFunctional& gamma, const RandomStream& stream,
                                         std::size_t samples, unsigned threads = 0);

/// Draws phi(xi) with the same index layout as e_abs_dev_monte_carlo.
std::vector<double> sample_functional(const ChaosFunctional& phi, const RandomStream& stream,
                                      std::size_t samples, unsigned threads = 0);

/**
 * theta * E|1 - Gamma|. A constant Gamma is exact, Gamma on at most
 * quadrature_max_coords coordinates is integrated adaptively, anything else
 * is sampled in fixed blocks.
 */
BoundReport chaos_normal_bound(const ChaosFunctional& phi, ThetaChoice theta,
                            const RandomStream& stream, std::size_t samples,
                            const ChaosBoundOptions& options = {});

/**
 * chaos_normal_bound plus the empirical distance of `samples` draws of phi
 * (stream substream 1) with bootstrap errors (substream 2). In assert mode
 * assertion_passed records empirical <= bound + 3 * sampling error.
 * Only Wasserstein and Kolmogorov are accepted.
 */
BoundReport bound_vs_empirical(const ChaosFunctional& phi, ThetaChoice theta,
                               const RandomStream& stream, std::size_t samples,
                               const ChaosBoundOptions& options = {});

}  // namespace steinchaos
