#include "steinchaos/gauss_core.hpp"

#include <boost/math/special_functions/erf.hpp>

#include <cmath>
#include <limits>
#include <string>

#include "steinchaos/errors.hpp"

namespace steinchaos {

namespace {

constexpr double kInvSqrt2 = 0.707106781186547524400844362104849039;
// pi^{-1/4}
constexpr double kPiMinusQuarter = 0.751125544464942483361405155719475;

void require_finite(double w, const char* what) {
  if (!std::isfinite(w)) {
    throw DomainError(std::string(what) + ": argument must be finite");
  }
}

}  // namespace

double std_normal_pdf(double w) { return kInvSqrt2Pi * std::exp(-0.5 * w * w); }

double std_normal_cdf(double w) {
  require_finite(w, "std_normal_cdf");
  if (std::abs(w) < 0.5) return 0.5 + 0.5 * std::erf(w * kInvSqrt2);
  if (w < 0.0) return 0.5 * std::erfc(-w * kInvSqrt2);
  return 1.0 - 0.5 * std::erfc(w * kInvSqrt2);
}

double std_normal_sf(double w) {
  require_finite(w, "std_normal_sf");
  if (std::abs(w) < 0.5) return 0.5 - 0.5 * std::erf(w * kInvSqrt2);
  if (w > 0.0) return 0.5 * std::erfc(w * kInvSqrt2);
  return 1.0 - 0.5 * std::erfc(-w * kInvSqrt2);
}

double std_normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw DomainError("std_normal_quantile: probability must lie in (0, 1)");
  }
  if (p < 0.5) return -kSqrt2 * boost::math::erfc_inv(2.0 * p);
  return kSqrt2 * boost::math::erfc_inv(2.0 * (1.0 - p));
}

double mills_ratio(double u) {
  require_finite(u, "mills_ratio");
  if (u < 37.0) return std_normal_sf(u) / std_normal_pdf(u);
  // 1/u * (1 - 1/u^2 + 3/u^4 - 15/u^6 + ...); the terms are below 1e-25 here.
  const double inv2 = 1.0 / (u * u);
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k <= 6; ++k) {
    term *= -(2.0 * k - 1.0) * inv2;
    sum += term;
  }
  return sum / u;
}

HermiteBasis::HermiteBasis(std::size_t max_index) : max_index_(max_index) {}

double HermiteBasis::function(std::size_t n, double t) const {
  if (n > max_index_) {
    throw CapacityError("HermiteBasis: index " + std::to_string(n) + " exceeds max_index " +
                        std::to_string(max_index_));
  }
  require_finite(t, "HermiteBasis::function");
  double prev = 0.0;
  double cur = kPiMinusQuarter * std::exp(-0.5 * t * t);
  for (std::size_t k = 0; k < n; ++k) {
    const double kd = static_cast<double>(k);
    const double next =
        std::sqrt(2.0 / (kd + 1.0)) * t * cur - std::sqrt(kd / (kd + 1.0)) * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

std::vector<double> HermiteBasis::evaluate_all(double t) const {
  require_finite(t, "HermiteBasis::evaluate_all");
  std::vector<double> out(max_index_ + 1);
  out[0] = kPiMinusQuarter * std::exp(-0.5 * t * t);
  if (max_index_ >= 1) out[1] = kSqrt2 * t * out[0];
  for (std::size_t k = 1; k < max_index_; ++k) {
    const double kd = static_cast<double>(k);
    out[k + 1] = std::sqrt(2.0 / (kd + 1.0)) * t * out[k] - std::sqrt(kd / (kd + 1.0)) * out[k - 1];
  }
  return out;
}

}  // namespace steinchaos
