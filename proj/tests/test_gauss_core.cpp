#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "steinchaos/errors.hpp"
#include "steinchaos/gauss_core.hpp"

using namespace steinchaos;

namespace {

// Phi(x) = 1/2 + phi(x) * sum_k x^{2k+1} / (1 * 3 * ... * (2k+1)), fine for |x| <= 3.
double cdf_series(double x) {
  double term = x;
  double sum = x;
  for (int k = 1; k < 200; ++k) {
    term *= x * x / (2.0 * k + 1.0);
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return 0.5 + std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI) * sum;
}

// Physicists' Hermite coefficients by the integer recurrence H_{n+1} = 2t H_n - 2n H_{n-1}.
std::vector<std::vector<long double>> hermite_coefficients(int max_n) {
  std::vector<std::vector<long double>> c(max_n + 1);
  c[0] = {1.0L};
  if (max_n >= 1) c[1] = {0.0L, 2.0L};
  for (int n = 1; n < max_n; ++n) {
    c[n + 1].assign(n + 2, 0.0L);
    for (int k = 0; k <= n; ++k) c[n + 1][k + 1] += 2.0L * c[n][k];
    for (int k = 0; k <= n - 1; ++k) c[n + 1][k] -= 2.0L * n * c[n - 1][k];
  }
  return c;
}

}  // namespace

TEST(StdNormalCdf, HalfAtZero) { EXPECT_EQ(std_normal_cdf(0.0), 0.5); }

TEST(StdNormalCdf, SymmetryOnGrid) {
  for (double w = -12.0; w <= 12.0; w += 0.037) {
    EXPECT_NEAR(std_normal_cdf(w) + std_normal_cdf(-w), 1.0, 1e-15) << w;
  }
}

TEST(StdNormalCdf, MatchesSeriesOracle) {
  EXPECT_NEAR(std_normal_cdf(1.0), cdf_series(1.0), 1e-13);
  for (double w = -3.0; w <= 3.0; w += 0.1) EXPECT_NEAR(std_normal_cdf(w), cdf_series(w), 1e-14) << w;
}

TEST(StdNormalCdf, MonotoneOnGrid) {
  double prev = 0.0;
  for (double w = -40.0; w <= 40.0; w += 0.01) {
    const double v = std_normal_cdf(w);
    EXPECT_GE(v, prev);
    prev = v;
  }
}

TEST(StdNormalCdf, DerivativeIsDensity) {
  const double h = 1e-5;
  for (double w = -6.0; w <= 6.0; w += 0.25) {
    const double fd = (std_normal_cdf(w + h) - std_normal_cdf(w - h)) / (2.0 * h);
    EXPECT_NEAR(fd, std::exp(-0.5 * w * w) / std::sqrt(2.0 * M_PI), 1e-8) << w;
  }
}

TEST(StdNormalCdf, RejectsNonFinite) {
  EXPECT_THROW(std_normal_cdf(std::numeric_limits<double>::quiet_NaN()), DomainError);
  EXPECT_THROW(std_normal_cdf(std::numeric_limits<double>::infinity()), DomainError);
}

TEST(StdNormalSf, TailAccuracy) {
  // 1 - Phi(10) = 7.6198530241604696e-24
  EXPECT_NEAR(std_normal_sf(10.0) / 7.6198530241604696e-24, 1.0, 1e-13);
}

TEST(StdNormalQuantile, InvertsCdf) {
  for (double p : {1e-12, 1e-6, 0.01, 0.3, 0.5, 0.77, 0.999}) {
    EXPECT_NEAR(std_normal_cdf(std_normal_quantile(p)), p, 1e-14 + 1e-12 * p) << p;
  }
  EXPECT_THROW(std_normal_quantile(0.0), DomainError);
  EXPECT_THROW(std_normal_quantile(1.5), DomainError);
}

TEST(MillsRatio, MatchesDefinitionAndAsymptote) {
  for (double u = -5.0; u <= 8.0; u += 0.5) {
    EXPECT_NEAR(mills_ratio(u), std_normal_sf(u) / std_normal_pdf(u), 1e-13 * mills_ratio(u)) << u;
  }
  // R(u) ~ 1/u - 1/u^3 + 3/u^5 - 15/u^7, alternating with error below the first omitted term.
  const double u = 60.0;
  EXPECT_NEAR(mills_ratio(u), 1.0 / u - 1.0 / std::pow(u, 3) + 3.0 / std::pow(u, 5) - 15.0 / std::pow(u, 7),
              105.0 / std::pow(u, 9) + 1e-17);
}

TEST(HermiteBasis, SimpleValues) {
  const HermiteBasis b;
  EXPECT_EQ(b.max_index(), 64u);
  EXPECT_EQ(b.function(1, 0.0), 0.0);
  EXPECT_NEAR(b.function(0, 0.0), std::pow(M_PI, -0.25), 1e-16);
  EXPECT_EQ(HermiteBasis::eigenvalue(0), 2.0);
  EXPECT_EQ(HermiteBasis::eigenvalue(7), 16.0);
}

TEST(HermiteBasis, CapacityError) {
  const HermiteBasis b(10);
  EXPECT_NO_THROW(b.function(10, 0.3));
  EXPECT_THROW(b.function(11, 0.3), CapacityError);
}

TEST(HermiteBasis, RecurrenceMatchesExactCoefficients) {
  const auto coeffs = hermite_coefficients(12);
  const HermiteBasis b;
  for (int n = 0; n <= 12; ++n) {
    long double norm = std::sqrt(std::sqrt(static_cast<long double>(M_PI)));
    for (int k = 1; k <= n; ++k) norm *= std::sqrt(2.0L * k);
    for (int i = 0; i <= 100; ++i) {
      const long double t = -6.0L + 0.12L * i;
      long double h = 0.0L;
      for (int k = n; k >= 0; --k) h = h * t + coeffs[n][k];
      const double ref = static_cast<double>(h * std::exp(-t * t / 2.0L) / norm);
      const double got = b.function(n, static_cast<double>(t));
      EXPECT_LE(std::abs(got - ref), 1e-10 * std::max(std::abs(ref), 1e-8)) << n << " " << (double)t;
    }
  }
}

TEST(HermiteBasis, Orthonormality) {
  // trapezoid on [-16, 16] is spectrally accurate for these Gaussian-decaying integrands
  const HermiteBasis b(20);
  const double step = 0.005;
  std::vector<std::vector<double>> values;
  for (double t = -16.0; t <= 16.0 + 1e-12; t += step) values.push_back(b.evaluate_all(t));
  for (int m = 0; m <= 20; ++m) {
    for (int n = m; n <= 20; ++n) {
      double s = 0.0;
      for (const auto& v : values) s += v[m] * v[n];
      EXPECT_NEAR(s * step, m == n ? 1.0 : 0.0, 1e-10) << m << "," << n;
    }
  }
}

TEST(HermiteBasis, NoOverflowAtHighOrder) {
  const HermiteBasis b(200);
  for (double t : {-50.0, -20.0, 0.0, 13.0, 50.0}) {
    const auto all = b.evaluate_all(t);
    for (double v : all) EXPECT_TRUE(std::isfinite(v)) << t;
  }
}
