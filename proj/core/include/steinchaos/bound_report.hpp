#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "steinchaos/dist_metrics.hpp"

namespace steinchaos {

/// sup_h ||f_h'|| over the test family of a metric: sqrt(2/pi), 1 or 2.
struct ThetaChoice {
  Metric metric = Metric::wasserstein;
  double value = 0.0;
};

ThetaChoice theta_for(Metric metric);

/// Result of a theta * E|1 - T| style bound, optionally with an empirical distance beside it.
struct BoundReport {
  std::string subject;
  ThetaChoice theta;
  double bound = 0.0;
  double e_abs_dev = 0.0;  ///< E|1 - T| (or E|1 - Gamma|)
  std::optional<double> carre_mean;
  double mc_std_error = 0.0;
  std::optional<double> mc_e_abs_dev;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  std::optional<double> empirical_distance;
  std::optional<double> empirical_std_error;
  std::optional<double> empirical_sampling_error;
  std::optional<bool> assertion_passed;
  std::optional<double> normalization_scale;
  std::string method;
  std::vector<std::pair<std::string, double>> tolerances;
};

}  // namespace steinchaos
