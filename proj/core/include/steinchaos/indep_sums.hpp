#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "steinchaos/dist_metrics.hpp"
#include "steinchaos/random_stream.hpp"

namespace steinchaos {

enum class DistKind { rademacher, uniform, discrete, scaled_chi2_term };

const char* to_string(DistKind kind);

/// Law of one centered summand X_i with its variance and third absolute moment.
class DistSpec {
 public:
  /// +/- scale with probability 1/2 each.
  static DistSpec rademacher(double scale);
  /// Uniform on [-half_width, half_width].
  static DistSpec uniform(double half_width);
  /// Finite law; probabilities must sum to 1 and the mean must vanish (both to 1e-12).
  static DistSpec discrete(std::vector<double> points, std::vector<double> probs);
  /// scale * (G^2 - 1) with G ~ N(0, 1); scale = 1/sqrt(2n) gives one term of a standardized chi^2_n.
  static DistSpec scaled_chi2_term(double scale);

  DistKind kind() const { return kind_; }
  double mean() const { return 0.0; }
  double variance() const { return var_; }
  double abs1() const { return abs1_; }
  double abs3() const { return abs3_; }
  double scale() const { return scale_; }
  const std::vector<double>& points() const { return points_; }
  const std::vector<double>& probs() const { return probs_; }

  /// Smallest and largest point of the support (upper may be +inf).
  double support_lower() const;
  double support_upper() const;

  /// One draw; uses stream index `index` only.
  double sample(const RandomStream& stream, std::uint64_t index) const;

 private:
  DistSpec() = default;

  DistKind kind_ = DistKind::rademacher;
  double scale_ = 0.0;
  double var_ = 0.0;
  double abs1_ = 0.0;
  double abs3_ = 0.0;
  std::vector<double> points_;
  std::vector<double> probs_;
  std::vector<double> cumulative_;
};

/// K(t) = E[X (I(X > t > 0) - I(X < t < 0))]; K / Var(X) is a probability density.
double k_kernel(const DistSpec& dist, double t);

struct KernelMoments {
  double mass = 0.0;       ///< int K(t) dt, equal to Var(X)
  double first_abs = 0.0;  ///< int |t| K(t) dt, equal to E|X|^3 / 2
};

/// Both integrals by adaptive quadrature of K, split at every support point.
KernelMoments k_kernel_moments(const DistSpec& dist);

/// W = sum of independent terms, normalized so that Var(W) = 1.
class IndepSumModel {
 public:
  /// Throws ValidationError unless the variances sum to 1 within 1e-12.
  explicit IndepSumModel(std::vector<DistSpec> terms);

  const std::vector<DistSpec>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }

  static IndepSumModel rademacher_iid(std::size_t n);
  static IndepSumModel uniform_iid(std::size_t n);
  static IndepSumModel chi2(std::size_t n);

 private:
  std::vector<DistSpec> terms_;
};

/// 3 * sum_i E|X_i|^3.
double wasserstein_bound_indep(const IndepSumModel& model);

/**
 * Draws `samples` realizations of W. Coordinate k of draw s reads stream
 * index s * model.size() + k, so the output only depends on the stream.
 */
SampleSet simulate_sum(const IndepSumModel& model, const RandomStream& stream,
                       std::size_t samples, unsigned threads = 0);

/**
 * Model file: a JSON list of {"kind": ..., "params": {...}, "repeat": n?}
 * with kinds rademacher{scale}, uniform{half_width}, discrete{points, probs},
 * scaled_chi2_term{scale}. Throws ValidationError naming the offending field.
 */
IndepSumModel parse_model_json(const std::string& text);
IndepSumModel load_model_file(const std::string& path);

}  // namespace steinchaos
