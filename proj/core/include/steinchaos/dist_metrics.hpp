#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "steinchaos/random_stream.hpp"

namespace steinchaos {

/// The separating families: Lipschitz-1 functions, half-line indicators, Borel indicators.
enum class Metric { wasserstein, kolmogorov, total_variation };

const char* to_string(Metric metric);

/// Accepts "wasserstein"/"w", "kolmogorov"/"ks"/"k", "total_variation"/"tv".
Metric parse_metric(const std::string& name);

/// A finite sample of a real random variable.
class SampleSet {
 public:
  /// Throws DomainError when empty or when a value is not finite.
  explicit SampleSet(std::vector<double> values, bool sorted = false);

  const std::vector<double>& values() const { return values_; }
  bool sorted() const { return sorted_; }
  std::size_t size() const { return values_.size(); }

  void sort();
  SampleSet sorted_copy() const;

 private:
  std::vector<double> values_;
  bool sorted_;
};

struct DistanceReport {
  Metric metric = Metric::wasserstein;
  double estimate = 0.0;
  std::optional<double> std_error;
  /// Bootstrap mean of d(F*_n, F_n); by the triangle inequality it estimates |d(F_n, Phi) - d(F, Phi)|.
  std::optional<double> sampling_error;
  std::string method;
};

/**
 * d_W(F_n, Phi) = int |F_n(t) - Phi(t)| dt. F_n is constant between order
 * statistics, and each piece is integrated in closed form through the
 * antiderivative t Phi(t) + phi(t), split where Phi crosses the ECDF level.
 * Needs at least two observations.
 */
DistanceReport wasserstein_to_normal(const SampleSet& sample);

/// One-sample Kolmogorov-Smirnov statistic sup_x |F_n(x) - Phi(x)|.
DistanceReport kolmogorov_to_normal(const SampleSet& sample);

/// A one-dimensional probability density supported on [lower, upper].
struct Density {
  std::string name;
  std::function<double(double)> pdf;
  double lower = 0.0;
  double upper = 0.0;
  /// Interior points where pdf is not smooth.
  std::vector<double> breakpoints;
};

/// Density of (chi^2_n - n) / sqrt(2n); requires n >= 2 so the density is bounded.
Density standardized_chi2_density(unsigned n);

/// Density of Z + delta.
Density shifted_normal_density(double delta);

/// d_TV = (1/2) int |p - phi|. Throws ValidationError if int p differs from 1 by more than 1e-8.
DistanceReport tv_to_normal_density(const Density& density, double abs_tol = 1e-10);

/**
 * Bootstrap standard error of the Wasserstein or Kolmogorov estimate.
 * Replicate r draws its multinomial resample from stream indices
 * [r n, (r+1) n), so the result is independent of the thread count.
 */
double bootstrap_std_error(const SampleSet& sample, Metric metric, std::size_t replicates,
                           const RandomStream& stream, unsigned threads = 0);

struct BootstrapSummary {
  double std_error = 0.0;       ///< spread of d(F*_n, Phi) over replicates
  double sampling_error = 0.0;  ///< mean of d(F*_n, F_n)
  std::size_t replicates = 0;
};

/// Both bootstrap statistics from one set of resamples (same stream layout as bootstrap_std_error).
BootstrapSummary bootstrap_summary(const SampleSet& sample, Metric metric, std::size_t replicates,
                                   const RandomStream& stream, unsigned threads = 0);

/// Estimate plus bootstrap standard error (replicates == 0 leaves std_error empty).
DistanceReport distance_to_normal(const SampleSet& sample, Metric metric,
                                  std::size_t bootstrap_replicates, const RandomStream& stream,
                                  unsigned threads = 0);

}  // namespace steinchaos
