#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "chaos_test_util.hpp"
#include "steinchaos/chaos_algebra.hpp"
#include "steinchaos/errors.hpp"
#include "steinchaos/gauss_core.hpp"
#include "steinchaos/parallel.hpp"
#include "steinchaos/random_stream.hpp"

using namespace steinchaos;
using chaos_test::evaluate_explicit;
using chaos_test::gh_expectation;
using chaos_test::random_functional;

namespace {

CoeffVector random_point(std::mt19937_64& rng, std::uint32_t dims, double spread = 1.5) {
  std::normal_distribution<double> g(0.0, spread);
  CoeffVector x;
  for (std::uint32_t j = 0; j < dims; ++j) x.set(j, g(rng));
  return x;
}

CoeffVector plus(const CoeffVector& x, const CoeffVector& dir, double step) {
  CoeffVector y = x;
  for (const auto& [j, v] : dir.values()) y.set(j, x.get(j) + step * v);
  return y;
}

// Ornstein-Uhlenbeck generator -Laplacian + x . grad by central differences.
double ou_generator_fd(const ChaosFunctional& phi, const CoeffVector& x, std::uint32_t dims) {
  const double h = 1e-3;
  double s = 0.0;
  const double f0 = evaluate(phi, x);
  for (std::uint32_t j = 0; j < dims; ++j) {
    const CoeffVector e{{j, 1.0}};
    const double fp = evaluate(phi, plus(x, e, h));
    const double fm = evaluate(phi, plus(x, e, -h));
    s += -(fp - 2.0 * f0 + fm) / (h * h) + x.get(j) * (fp - fm) / (2.0 * h);
  }
  return s;
}

}  // namespace

TEST(MultiIndex, NormalizationAndOrder) {
  const MultiIndex a{{3, 2}, {0, 1}, {5, 0}};
  EXPECT_EQ(a.entries().size(), 2u);
  EXPECT_EQ(a.entries()[0].first, 0u);
  EXPECT_EQ(a.order(), 3u);
  EXPECT_EQ(a.multiplicity(3), 2u);
  EXPECT_EQ(a.multiplicity(4), 0u);
  EXPECT_EQ(a.shifted(0, -1), MultiIndex::unit(3, 2));
  EXPECT_THROW(a.shifted(4, -1), DomainError);
  EXPECT_THROW(MultiIndex({{1, 1}, {1, 2}}), ValidationError);
  EXPECT_THROW(MultiIndex::unit(64), CapacityError);
  EXPECT_NO_THROW(MultiIndex::unit(63));
}

TEST(MultiIndex, GradedOrdering) {
  EXPECT_LT(MultiIndex{}, MultiIndex::unit(7));
  EXPECT_LT(MultiIndex::unit(9), MultiIndex::unit(0, 2));
  EXPECT_LT(MultiIndex::unit(0), MultiIndex::unit(1));
  EXPECT_FALSE(MultiIndex::unit(1) < MultiIndex::unit(1));
}

TEST(NormalizedHermite, MatchesExplicitPolynomials) {
  for (double x : {-3.1, -0.4, 0.0, 0.9, 2.5}) {
    const auto v = normalized_hermite(x, 6);
    for (std::uint32_t k = 0; k <= 6; ++k) EXPECT_NEAR(v[k], chaos_test::he_normalized(k, x), 1e-12) << k;
  }
}

TEST(ChaosFunctional, EvaluateMatchesExplicit) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    const auto phi = random_functional(rng, 3, 6, 8);
    const auto x = random_point(rng, 3);
    EXPECT_NEAR(evaluate(phi, x), evaluate_explicit(phi, x), 1e-10 * (1.0 + std::abs(evaluate(phi, x))));
  }
  EXPECT_THROW(evaluate(ChaosFunctional::basis(MultiIndex::unit(2)), CoeffVector{{0, 1.0}}), DomainError);
}

TEST(ChaosFunctional, ParsevalAgainstQuadrature) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 10; ++trial) {
    const auto phi = random_functional(rng, 3, 5, 6);
    const double mean = gh_expectation([&](const CoeffVector& x) { return evaluate(phi, x); }, 3);
    const double second = gh_expectation(
        [&](const CoeffVector& x) {
          const double v = evaluate(phi, x);
          return v * v;
        },
        3);
    EXPECT_NEAR(mean, phi.expectation(), 1e-10);
    EXPECT_NEAR(second - mean * mean, phi.variance(), 1e-9 * (1.0 + phi.variance()));
    EXPECT_NEAR(norm_2p(phi, 0.0) * norm_2p(phi, 0.0), second, 1e-9 * (1.0 + second));
  }
}

TEST(Multiply, PointwiseProduct) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    const auto phi = random_functional(rng, 3, 5, 5);
    const auto psi = random_functional(rng, 3, 5, 5);
    const auto prod = multiply(phi, psi);
    for (int k = 0; k < 5; ++k) {
      const auto x = random_point(rng, 3, 1.0);
      const double expect = evaluate(phi, x) * evaluate(psi, x);
      EXPECT_NEAR(evaluate(prod, x), expect, 1e-9 * (1.0 + std::abs(expect)));
    }
    EXPECT_NEAR(prod.expectation(), inner(phi, psi), 1e-10 * (1.0 + std::abs(inner(phi, psi))));
  }
}

TEST(Multiply, KnownLinearization) {
  // x * x = He_2 + 1 = sqrt(2) Xi_2 + 1
  const auto x = ChaosFunctional::basis(MultiIndex::unit(0));
  const auto sq = multiply(x, x);
  EXPECT_NEAR(sq.coeff(MultiIndex{}), 1.0, 1e-15);
  EXPECT_NEAR(sq.coeff(MultiIndex::unit(0, 2)), std::sqrt(2.0), 1e-15);
  EXPECT_EQ(sq.size(), 2u);
}

TEST(Multiply, CommutativeAndCapacity) {
  std::mt19937_64 rng(4);
  const auto phi = random_functional(rng, 4, 4, 6);
  const auto psi = random_functional(rng, 4, 4, 6);
  const auto a = multiply(phi, psi);
  const auto b = multiply(psi, phi);
  for (const auto& [alpha, c] : a.terms()) EXPECT_NEAR(c, b.coeff(alpha), 1e-12);
  const auto big = ChaosFunctional::basis(MultiIndex::unit(0, 9));
  EXPECT_THROW(multiply(big, big), CapacityError);
  EXPECT_NO_THROW(multiply(big, big, 18));
}

TEST(NumberOperator, MatchesOrnsteinUhlenbeckGenerator) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const auto phi = random_functional(rng, 3, 4, 6);
    const auto nphi = number_op(phi);
    for (int k = 0; k < 4; ++k) {
      const auto x = random_point(rng, 3, 1.0);
      EXPECT_NEAR(evaluate(nphi, x), ou_generator_fd(phi, x, 3), 2e-4 * (1.0 + std::abs(evaluate(nphi, x))));
    }
  }
}

TEST(NumberOperator, InverseOnCenteredPart) {
  std::mt19937_64 rng(6);
  const auto phi = random_functional(rng, 3, 5, 8, true);
  const auto back = number_op(inv_number_op(phi));
  for (const auto& [alpha, c] : phi.terms()) EXPECT_NEAR(back.coeff(alpha), c, 1e-14);
  EXPECT_THROW(inv_number_op(phi + ChaosFunctional::constant(0.5)), PreconditionError);
}

TEST(Derivative, DirectionalMatchesFiniteDifference) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    const auto phi = random_functional(rng, 3, 5, 6);
    const auto eta = random_point(rng, 3, 1.0);
    const auto d = directional_derivative(phi, eta);
    const auto via_components = hida_derivative(phi).directional(eta);
    for (int k = 0; k < 4; ++k) {
      const auto x = random_point(rng, 3, 1.0);
      const double h = 1e-5;
      const double fd = (evaluate(phi, plus(x, eta, h)) - evaluate(phi, plus(x, eta, -h))) / (2.0 * h);
      EXPECT_NEAR(evaluate(d, x), fd, 1e-5 * (1.0 + std::abs(fd)));
      EXPECT_NEAR(evaluate(via_components, x), evaluate(d, x), 1e-11 * (1.0 + std::abs(fd)));
    }
  }
}

TEST(Derivative, EnergyEqualsQuadraticFormOfN) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    const auto phi = random_functional(rng, 4, 5, 8);
    EXPECT_NEAR(hida_derivative(phi).energy(), inner(phi, number_op(phi)), 1e-10 * (1.0 + phi.variance()));
  }
}

TEST(Derivative, PointwiseDerivativeIntegratesToEnergy) {
  std::mt19937_64 rng(9);
  const auto phi = random_functional(rng, 4, 4, 6);
  const auto hd = hida_derivative(phi);
  double s = 0.0;
  const double step = 0.01;
  for (double t = -20.0; t <= 20.0; t += step) s += hd.at(t).variance() + std::pow(hd.at(t).expectation(), 2);
  EXPECT_NEAR(s * step, hd.energy(), 1e-8 * (1.0 + hd.energy()));
}

TEST(Derivative, AnnihilatorLowersOneCoordinate) {
  const MultiIndex alpha{{0, 3}, {2, 1}};
  const auto a0 = annihilate(ChaosFunctional::basis(alpha, 2.0), 0);
  EXPECT_EQ(a0.size(), 1u);
  EXPECT_NEAR(a0.coeff(MultiIndex{{0, 2}, {2, 1}}), 2.0 * std::sqrt(3.0), 1e-15);
  EXPECT_EQ(annihilate(ChaosFunctional::basis(alpha), 1).size(), 0u);
}

TEST(IntegrationByParts, HoldsAndMatchesQuadrature) {
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 10; ++trial) {
    const auto phi = random_functional(rng, 3, 5, 6);
    const auto h = random_point(rng, 3, 1.0);
    const auto r = ibp_check(phi, h);
    EXPECT_NEAR(r.lhs, r.rhs, 1e-12 * (1.0 + std::abs(r.lhs)));
    const double quad = gh_expectation(
        [&](const CoeffVector& x) {
          double dot = 0.0;
          for (const auto& [j, v] : h.values()) dot += v * x.get(j);
          return dot * evaluate(phi, x);
        },
        3);
    EXPECT_NEAR(r.lhs, quad, 1e-9 * (1.0 + std::abs(quad)));
  }
}

TEST(STransform, ShiftedExpectation) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const auto phi = random_functional(rng, 3, 5, 6);
    const auto eta = random_point(rng, 3, 0.7);
    const double quad = gh_expectation([&](const CoeffVector& x) { return evaluate(phi, plus(x, eta, 1.0)); }, 3);
    EXPECT_NEAR(s_transform(phi, eta), quad, 1e-9 * (1.0 + std::abs(quad)));
  }
}

TEST(Norms, WeightedNormsAndCoefficientNorm) {
  const CoeffVector eta{{0, 1.0}, {2, 0.5}};
  EXPECT_NEAR(eta.norm_p(0.0), std::sqrt(1.25), 1e-15);
  EXPECT_NEAR(eta.norm_p(1.0), std::sqrt(4.0 + 36.0 * 0.25), 1e-14);
  EXPECT_NEAR(eta.norm_p(-1.0), std::sqrt(0.25 + 0.25 / 36.0), 1e-15);
  const auto phi = ChaosFunctional::basis(MultiIndex{{0, 1}, {1, 2}}, 3.0);
  EXPECT_NEAR(norm_2p(phi, 0.5), 3.0 * std::sqrt(2.0 * 16.0), 1e-13);
  // Norms increase in p.
  std::mt19937_64 rng(12);
  const auto psi = random_functional(rng, 4, 4, 8);
  EXPECT_LE(norm_2p(psi, -1.0), norm_2p(psi, 0.0));
  EXPECT_LE(norm_2p(psi, 0.0), norm_2p(psi, 1.0));
}

TEST(OmegaR, MatchesBruteForceSupremum) {
  for (double r : {0.05, 0.1, 0.3, 0.5, 1.0, 2.0}) {
    double best = 0.0;
    for (int n = 1; n <= 2000; ++n) best = std::max(best, n * std::pow(4.0, -n * r));
    EXPECT_NEAR(omega_r(r), std::sqrt(best), 1e-14) << r;
  }
  EXPECT_THROW(omega_r(0.0), DomainError);
}

TEST(ChaosFunctional, ArithmeticAndQueries) {
  const auto a = ChaosFunctional::first_chaos(CoeffVector{{1, 0.6}, {4, 0.8}});
  EXPECT_NEAR(a.variance(), 1.0, 1e-15);
  EXPECT_EQ(a.max_order(), 1u);
  EXPECT_EQ(a.basis_dim(), 5u);
  EXPECT_EQ(a.active_coordinates(), (std::vector<std::uint32_t>{1, 4}));
  const auto zero = a + a.scaled(-1.0);
  EXPECT_EQ(zero.size(), 0u);
  EXPECT_TRUE(ChaosFunctional::constant(2.0).is_constant());
}

TEST(Examples, EvaluateNormAndSTransform) {
  const auto x0 = ChaosFunctional::basis(MultiIndex::unit(0));
  const auto x00 = ChaosFunctional::basis(MultiIndex::unit(0, 2));
  EXPECT_DOUBLE_EQ(evaluate(x0, CoeffVector{{0, 1.7}}), 1.7);
  EXPECT_NEAR(evaluate(x00, CoeffVector{{0, 1.0}}), 0.0, 1e-16);
  EXPECT_DOUBLE_EQ(norm_2p(x0, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(norm_2p(ChaosFunctional::basis(MultiIndex::unit(1)), 1.0), 4.0);
  for (double t : {-1.3, 0.0, 0.4, 2.0}) {
    EXPECT_DOUBLE_EQ(s_transform(x0, CoeffVector{{0, t}}), t);
    EXPECT_NEAR(s_transform(x00, CoeffVector{{0, t}}), t * t / std::sqrt(2.0), 1e-15);
  }
  std::mt19937_64 rng(40);
  const auto phi = random_functional(rng, 4, 4, 6);
  EXPECT_DOUBLE_EQ(s_transform(phi, CoeffVector{}), phi.expectation());
}

TEST(Examples, MonteCarloMeanIsEmptyCoefficient) {
  std::mt19937_64 rng(41);
  const auto phi = random_functional(rng, 3, 4, 6);
  const RandomStream stream(41);
  MomentAccumulator acc;
  const std::size_t n = 100000;
  for (std::size_t s = 0; s < n; ++s) {
    CoeffVector x;
    for (std::uint32_t j = 0; j < 3; ++j) x.set(j, stream.normal(3 * s + j));
    acc.add(evaluate(phi, x));
  }
  EXPECT_NEAR(acc.mean, phi.expectation(), 4.0 * acc.std_error());
}

// S phi(eta) = exp(-|eta|^2/2) E[phi exp(<x, eta>)], sampled.
TEST(Examples, STransformMonteCarloDefinition) {
  std::mt19937_64 rng(42);
  const RandomStream stream(42);
  for (int trial = 0; trial < 3; ++trial) {
    const auto phi = random_functional(rng, 2, 4, 4);
    const CoeffVector eta{{0, 0.3}, {1, -0.2}};
    MomentAccumulator acc;
    for (std::size_t s = 0; s < 100000; ++s) {
      CoeffVector x;
      double dot = 0.0;
      for (std::uint32_t j = 0; j < 2; ++j) {
        x.set(j, stream.normal(2 * (s + 100000 * trial) + j));
        dot += x.get(j) * eta.get(j);
      }
      acc.add(evaluate(phi, x) * std::exp(dot - 0.5 * (0.09 + 0.04)));
    }
    EXPECT_NEAR(acc.mean, s_transform(phi, eta), 4.0 * acc.std_error());
  }
}

TEST(Examples, NumberOperatorAndInverse) {
  const MultiIndex a3{{0, 1}, {4, 2}};
  const auto n3 = number_op(ChaosFunctional::basis(a3, 0.7));
  ASSERT_EQ(n3.size(), 1u);
  EXPECT_NEAR(n3.coeff(a3), 2.1, 1e-15);
  EXPECT_EQ(number_op(ChaosFunctional::constant(5.0)).size(), 0u);
  EXPECT_EQ(inv_number_op(ChaosFunctional::basis(MultiIndex::unit(0, 2))),
            ChaosFunctional::basis(MultiIndex::unit(0, 2), 0.5));
  EXPECT_EQ(inv_number_op(ChaosFunctional::basis(MultiIndex::unit(0))), ChaosFunctional::basis(MultiIndex::unit(0)));
}

TEST(Examples, Annihilation) {
  EXPECT_EQ(annihilate(ChaosFunctional::basis(MultiIndex::unit(0)), 0), ChaosFunctional::constant(1.0));
  const auto a = annihilate(ChaosFunctional::basis(MultiIndex::unit(0, 2)), 0);
  EXPECT_NEAR(a.coeff(MultiIndex::unit(0)), std::sqrt(2.0), 1e-15);
  EXPECT_EQ(a.size(), 1u);
}

TEST(Examples, HidaDerivativeOfFirstChaos) {
  const HermiteBasis hb;
  const auto d = hida_derivative(ChaosFunctional::basis(MultiIndex::unit(3)));
  for (double t : {-2.0, 0.1, 1.5}) {
    const auto dt = d.at(t);
    EXPECT_TRUE(dt.is_constant());
    EXPECT_NEAR(dt.expectation(), hb.function(3, t), 1e-15);
  }
}

TEST(Examples, DirectionalDerivativeBoundedByNumberNorm) {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 50; ++trial) {
    const auto phi = random_functional(rng, 5, 5, 8);
    const auto eta = random_point(rng, 5, 1.0);
    const double lhs = norm_2p(directional_derivative(phi, eta), 0.0);
    const double rhs = eta.norm_p(0.0) * std::sqrt(inner(phi, number_op(phi)));
    EXPECT_LE(lhs, rhs * (1.0 + 1e-12));
  }
}

TEST(Examples, ComponentsLowerTheOrder) {
  std::mt19937_64 rng(44);
  for (int trial = 0; trial < 20; ++trial) {
    const auto phi = random_functional(rng, 4, 6, 8);
    const auto d = hida_derivative(phi);
    for (const auto& [j, c] : d.components()) EXPECT_LT(c.max_order(), phi.max_order());
  }
}

TEST(Examples, MultiplyByOneAndIbpBasics) {
  std::mt19937_64 rng(45);
  const auto phi = random_functional(rng, 3, 4, 6);
  const auto prod = multiply(phi, ChaosFunctional::constant(1.0));
  for (const auto& [alpha, c] : phi.terms()) EXPECT_DOUBLE_EQ(prod.coeff(alpha), c);
  EXPECT_EQ(prod.size(), phi.size());
  const auto r = ibp_check(ChaosFunctional::basis(MultiIndex::unit(0)), CoeffVector{{0, 1.0}});
  EXPECT_DOUBLE_EQ(r.lhs, 1.0);
  EXPECT_DOUBLE_EQ(r.rhs, 1.0);
  const auto z = ibp_check(ChaosFunctional::constant(3.0), CoeffVector{{0, 1.0}, {2, 0.5}});
  EXPECT_EQ(z.lhs, 0.0);
  EXPECT_EQ(z.rhs, 0.0);
}

TEST(Examples, OmegaValues) {
  EXPECT_DOUBLE_EQ(omega_r(1.0), 0.5);
  EXPECT_NEAR(omega_r(6.0), std::pow(2.0, -6.0), 1e-16);
  double best = 0.0;
  for (int n = 1; n <= 10000; ++n) best = std::max(best, n * std::pow(4.0, -0.1 * n));
  EXPECT_NEAR(omega_r(0.1), std::sqrt(best), 1e-14);
}

TEST(Derivative, GradientCheckTight) {
  std::mt19937_64 rng(46);
  for (int trial = 0; trial < 20; ++trial) {
    const auto phi = random_functional(rng, 3, 4, 6);
    const auto eta = random_point(rng, 3, 1.0);
    const auto d = directional_derivative(phi, eta);
    const auto x = random_point(rng, 3, 1.0);
    const double h = 1e-5;
    const double fd = (evaluate(phi, plus(x, eta, h)) - evaluate(phi, plus(x, eta, -h))) / (2.0 * h);
    EXPECT_NEAR(evaluate(d, x), fd, 1e-7 * std::max(1.0, std::abs(fd)));
  }
}
