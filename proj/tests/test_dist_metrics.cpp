#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "steinchaos/dist_metrics.hpp"
#include "steinchaos/errors.hpp"
#include "steinchaos/indep_sums.hpp"
#include "steinchaos/gauss_core.hpp"
#include "steinchaos/quadrature.hpp"

using namespace steinchaos;

namespace {

double cdf(double w) { return 0.5 * std::erfc(-w / std::sqrt(2.0)); }

std::vector<double> quantile_sample(std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = std_normal_quantile((i + 0.5) / static_cast<double>(n));
  return v;
}

// int |F_n - Phi| piece by piece with the adaptive integrator, split where Phi crosses each ECDF level.
double wasserstein_oracle(std::vector<double> x) {
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  const double inf = std::numeric_limits<double>::infinity();
  double s = integrate([](double t) { return cdf(t); }, -inf, x.front(), 1e-15) +
             integrate([](double t) { return 0.5 * std::erfc(t / std::sqrt(2.0)); }, x.back(), inf, 1e-15);
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const double level = (i + 1) / n;
    auto gap = [level](double t) { return std::abs(level - cdf(t)); };
    const double c = std_normal_quantile(level);
    if (x[i] < c && c < x[i + 1]) {
      s += integrate(gap, x[i], c, 1e-15) + integrate(gap, c, x[i + 1], 1e-15);
    } else if (x[i] < x[i + 1]) {
      s += integrate(gap, x[i], x[i + 1], 1e-15);
    }
  }
  return s;
}

double ks_oracle(std::vector<double> x) {
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    d = std::max({d, std::abs((i + 1) / n - cdf(x[i])), std::abs(i / n - cdf(x[i]))});
  }
  return d;
}

}  // namespace

TEST(SampleSet, Validation) {
  EXPECT_THROW(SampleSet({}), DomainError);
  EXPECT_THROW(SampleSet({1.0, NAN}), DomainError);
  SampleSet s({3.0, 1.0, 2.0});
  EXPECT_FALSE(s.sorted());
  s.sort();
  EXPECT_TRUE(s.sorted());
  EXPECT_EQ(s.values(), (std::vector<double>{1.0, 2.0, 3.0}));
}

TEST(Wasserstein, PointMassAtZero) {
  const auto r = wasserstein_to_normal(SampleSet(std::vector<double>(50, 0.0)));
  EXPECT_NEAR(r.estimate, std::sqrt(2.0 / M_PI), 1e-8);
}

// Reference values from an independent piecewise quadrature (scipy) of |F_n - Phi|.
TEST(Wasserstein, QuantileGrid) {
  const std::vector<std::pair<std::size_t, double>> ref{
      {500, 0.003660779656404457}, {1000, 0.0019171500199999432}, {2000, 0.0010002820864653907},
      {10000, 0.00021831624175922397}};
  for (const auto& [n, w] : ref) {
    EXPECT_NEAR(wasserstein_to_normal(SampleSet(quantile_sample(n), true)).estimate, w, 1e-12 + 1e-9 * w) << n;
  }
  EXPECT_LE(wasserstein_to_normal(SampleSet(quantile_sample(10000), true)).estimate, 2.2e-4);
}

// The decay is 1/n up to a slowly varying factor, so a doubling shrinks the estimate by nearly two.
TEST(Wasserstein, DoublingNearlyHalvesOnQuantileGrid) {
  for (std::size_t n : {500u, 1000u, 4000u}) {
    const double a = wasserstein_to_normal(SampleSet(quantile_sample(n), true)).estimate;
    const double b = wasserstein_to_normal(SampleSet(quantile_sample(2 * n), true)).estimate;
    EXPECT_GT(a / b, 1.85) << n;
    EXPECT_LT(a / b, 2.0) << n;
  }
}

TEST(Wasserstein, ShiftIncreasesForSymmetricSample) {
  const auto base = quantile_sample(1000);
  double prev = wasserstein_to_normal(SampleSet(base, true)).estimate;
  for (double c : {0.01, 0.1, 0.5, 2.0}) {
    auto shifted = base;
    for (double& v : shifted) v += c;
    const double d = wasserstein_to_normal(SampleSet(shifted, true)).estimate;
    EXPECT_GT(d, prev) << c;
    prev = d;
  }
}

TEST(Wasserstein, MatchesRiemannOracle) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g(0.3, 1.4);
  std::vector<double> x(40);
  for (double& v : x) v = g(rng);
  EXPECT_NEAR(wasserstein_to_normal(SampleSet(x)).estimate, wasserstein_oracle(x), 1e-12);
}

TEST(Wasserstein, NeedsTwoPoints) { EXPECT_THROW(wasserstein_to_normal(SampleSet({0.0})), DomainError); }

TEST(Kolmogorov, Examples) {
  EXPECT_NEAR(kolmogorov_to_normal(SampleSet({0.0})).estimate, 0.5, 1e-15);
  EXPECT_NEAR(kolmogorov_to_normal(SampleSet({1e6})).estimate, 1.0, 1e-9);
  const std::size_t n = 10000;
  EXPECT_LE(kolmogorov_to_normal(SampleSet(quantile_sample(n), true)).estimate, 1e-4 + 0.5 / n);
}

TEST(Kolmogorov, MatchesBruteForce) {
  std::mt19937_64 rng(9);
  std::cauchy_distribution<double> g;
  std::vector<double> x(500);
  for (double& v : x) v = std::clamp(g(rng), -1e6, 1e6);
  EXPECT_NEAR(kolmogorov_to_normal(SampleSet(x)).estimate, ks_oracle(x), 1e-15);
}

TEST(Estimators, PermutationInvariant) {
  std::mt19937_64 rng(13);
  std::normal_distribution<double> g;
  std::vector<double> x(300);
  for (double& v : x) v = g(rng);
  auto y = x;
  std::shuffle(y.begin(), y.end(), rng);
  EXPECT_EQ(wasserstein_to_normal(SampleSet(x)).estimate, wasserstein_to_normal(SampleSet(y)).estimate);
  EXPECT_EQ(kolmogorov_to_normal(SampleSet(x)).estimate, kolmogorov_to_normal(SampleSet(y)).estimate);
}

TEST(TotalVariation, NormalIsZero) {
  EXPECT_NEAR(tv_to_normal_density(shifted_normal_density(0.0)).estimate, 0.0, 1e-10);
}

TEST(TotalVariation, ShiftedNormalClosedForm) {
  for (double delta : {0.1, 0.5, 2.0}) {
    EXPECT_NEAR(tv_to_normal_density(shifted_normal_density(delta)).estimate, 2.0 * cdf(delta / 2.0) - 1.0,
                1e-9)
        << delta;
  }
}

TEST(TotalVariation, Chi2DecreasesInN) {
  double prev = 1.0;
  for (unsigned n : {4u, 16u, 64u}) {
    const double d = tv_to_normal_density(standardized_chi2_density(n)).estimate;
    EXPECT_GT(d, 0.0);
    EXPECT_LT(d, prev);
    prev = d;
  }
  EXPECT_THROW(standardized_chi2_density(1), ValidationError);
}

TEST(TotalVariation, RejectsUnnormalizedDensity) {
  Density d = shifted_normal_density(0.0);
  d.pdf = [](double t) { return 1.01 * std_normal_pdf(t); };
  EXPECT_THROW(tv_to_normal_density(d), ValidationError);
}

TEST(Bootstrap, DeterministicAndThreadIndependent) {
  const auto z = sample_std_normal(RandomStream(3), 5000);
  SampleSet s(z);
  s.sort();
  const auto a = bootstrap_summary(s, Metric::wasserstein, 40, RandomStream(9), 1);
  const auto b = bootstrap_summary(s, Metric::wasserstein, 40, RandomStream(9), 4);
  EXPECT_EQ(a.std_error, b.std_error);
  EXPECT_EQ(a.sampling_error, b.sampling_error);
  EXPECT_GT(a.std_error, 0.0);
  EXPECT_GT(a.sampling_error, 0.0);
  EXPECT_THROW(bootstrap_std_error(s, Metric::total_variation, 10, RandomStream(1)), CapabilityError);
}

TEST(Bootstrap, SamplingErrorTracksDistanceFloor) {
  // For a true normal sample the whole empirical distance is sampling noise.
  const auto z = sample_std_normal(RandomStream(17), 20000);
  SampleSet s(z);
  s.sort();
  const auto rep = distance_to_normal(s, Metric::wasserstein, 30, RandomStream(4));
  ASSERT_TRUE(rep.sampling_error.has_value());
  EXPECT_LT(rep.estimate, 3.0 * *rep.sampling_error);
}

TEST(Metric, Parse) {
  EXPECT_EQ(parse_metric("w"), Metric::wasserstein);
  EXPECT_EQ(parse_metric("ks"), Metric::kolmogorov);
  EXPECT_EQ(parse_metric("tv"), Metric::total_variation);
  EXPECT_THROW(parse_metric("hellinger"), ValidationError);
}

TEST(Estimators, RangeCaps) {
  std::mt19937_64 rng(23);
  std::exponential_distribution<double> e(0.1);
  std::vector<double> x(200);
  for (double& v : x) v = e(rng);
  const auto k = kolmogorov_to_normal(SampleSet(x));
  EXPECT_GE(k.estimate, 0.0);
  EXPECT_LE(k.estimate, 1.0);
  EXPECT_GE(wasserstein_to_normal(SampleSet(x)).estimate, 0.0);
  const auto tv = tv_to_normal_density(shifted_normal_density(12.0));
  EXPECT_LE(tv.estimate, 1.0);
  EXPECT_NEAR(tv.estimate, std::erf(6.0 / std::sqrt(2.0)), 1e-6);
}

TEST(Estimators, KolmogorovBelowDensityTv) {
  const unsigned n = 10;
  auto w = simulate_sum(IndepSumModel::chi2(n), RandomStream(31), 1000000);
  w.sort();
  const auto dk = distance_to_normal(w, Metric::kolmogorov, 20, RandomStream(31, 2));
  const double tv = tv_to_normal_density(standardized_chi2_density(n)).estimate;
  EXPECT_LE(dk.estimate, tv + 3.0 * *dk.std_error);
}
