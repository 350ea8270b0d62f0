#include "steinchaos/hida_bound.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "steinchaos/errors.hpp"
#include "steinchaos/gauss_core.hpp"
#include "steinchaos/parallel.hpp"
#include "steinchaos/quadrature.hpp"

namespace steinchaos {

namespace {

constexpr std::size_t kBlock = 4096;
constexpr double kInf = std::numeric_limits<double>::infinity();

struct Prepared {
  ChaosFunctional phi;
  double scale = 1.0;
};

Prepared prepare(const ChaosFunctional& phi, const ChaosBoundOptions& options) {
  if (std::abs(phi.expectation()) > options.center_tol) {
    throw PreconditionError("the bound needs a centered functional (E[phi] = 0)");
  }
  Prepared p;
  ChaosFunctional::Terms t;
  for (const auto& [alpha, c] : phi.terms()) {
    if (!alpha.empty()) t[alpha] = c;
  }
  p.phi = ChaosFunctional(std::move(t));
  const double var = p.phi.variance();
  if (!(var > 0.0)) throw PreconditionError("the functional has zero variance");
  if (std::abs(var - 1.0) > options.variance_tol) {
    if (!options.normalize) {
      throw PreconditionError("Var phi = " + std::to_string(var) +
                              " differs from 1; pass normalize to rescale");
    }
    p.scale = 1.0 / std::sqrt(var);
    p.phi = p.phi.scaled(p.scale);
  }
  return p;
}

// Evaluates a functional on a fixed list of coordinates without map lookups per draw.
class DenseEvaluator {
 public:
  explicit DenseEvaluator(const ChaosFunctional& f) : coords_(f.active_coordinates()) {
    degree_.assign(coords_.size(), 0);
    for (const auto& [alpha, c] : f.terms()) {
      Term t{c, {}};
      for (const auto& [j, m] : alpha.entries()) {
        const std::size_t slot = static_cast<std::size_t>(
            std::lower_bound(coords_.begin(), coords_.end(), j) - coords_.begin());
        t.factors.push_back({slot, m});
        degree_[slot] = std::max(degree_[slot], m);
      }
      terms_.push_back(std::move(t));
    }
  }

  std::size_t dimension() const { return coords_.size(); }

  double operator()(const std::vector<double>& x) const {
    std::vector<std::vector<double>> tables(coords_.size());
    for (std::size_t k = 0; k < coords_.size(); ++k) tables[k] = normalized_hermite(x[k], degree_[k]);
    CompensatedSum acc;
    for (const auto& t : terms_) {
      double v = t.coeff;
      for (const auto& [slot, m] : t.factors) v *= tables[slot][m];
      acc.add(v);
    }
    return acc.value();
  }

 private:
  struct Term {
    double coeff;
    std::vector<std::pair<std::size_t, std::uint32_t>> factors;
  };
  std::vector<std::uint32_t> coords_;
  std::vector<std::uint32_t> degree_;
  std::vector<Term> terms_;
};

}  // namespace

ChaosFunctional carre_functional(const ChaosFunctional& phi) {
  const ChaosFunctional inv = inv_number_op(phi);
  ChaosFunctional gamma;
  for (std::uint32_t j : phi.active_coordinates()) {
    gamma = gamma + multiply(annihilate(inv, j), annihilate(phi, j));
  }
  return gamma;
}

double e_abs_dev_quadrature(const ChaosFunctional& gamma, double tol) {
  const DenseEvaluator eval(gamma);
  const std::vector<double> whole{-kInf, 0.0, kInf};
  if (eval.dimension() == 0) return std::abs(1.0 - eval({}));
  if (eval.dimension() == 1) {
    return integrate_piecewise(
        [&](double z) {
          const double w = std_normal_pdf(z);
          return w == 0.0 ? 0.0 : std::abs(1.0 - eval({z})) * w;
        },
        whole, tol, 20000);
  }
  if (eval.dimension() == 2) {
    return integrate_piecewise(
        [&](double z0) {
          const double w0 = std_normal_pdf(z0);
          if (w0 == 0.0) return 0.0;
          const double inner = integrate_piecewise(
              [&](double z1) {
                const double w1 = std_normal_pdf(z1);
                return w1 == 0.0 ? 0.0 : std::abs(1.0 - eval({z0, z1})) * w1;
              },
              whole, 0.1 * tol, 20000);
          return inner * w0;
        },
        whole, tol, 20000);
  }
  throw CapabilityError("quadrature of E|1 - Gamma| supports at most two coordinates");
}

MonteCarloEstimate e_abs_dev_monte_carlo(const ChaosFunctional& gamma, const RandomStream& stream,
                                         std::size_t samples, unsigned threads) {
  if (samples < 2) throw DomainError("Monte Carlo needs at least two samples");
  const std::vector<double> values = sample_functional(gamma, stream, samples, threads);
  const std::size_t blocks = (samples + kBlock - 1) / kBlock;
  std::vector<MomentAccumulator> parts(blocks);
  parallel_for(blocks, threads, [&](std::size_t b) {
    const std::size_t end = std::min(samples, (b + 1) * kBlock);
    for (std::size_t s = b * kBlock; s < end; ++s) parts[b].add(std::abs(1.0 - values[s]));
  });
  MomentAccumulator total;
  for (const auto& p : parts) total.merge(p);
  return {total.mean, total.std_error(), samples};
}

std::vector<double> sample_functional(const ChaosFunctional& phi, const RandomStream& stream,
                                      std::size_t samples, unsigned threads) {
  const DenseEvaluator eval(phi);
  const std::uint64_t width = std::max<std::size_t>(1, eval.dimension());
  std::vector<double> out(samples);
  const std::size_t blocks = (samples + kBlock - 1) / kBlock;
  parallel_for(blocks, threads, [&](std::size_t b) {
    std::vector<double> x(eval.dimension());
    const std::size_t end = std::min(samples, (b + 1) * kBlock);
    for (std::size_t s = b * kBlock; s < end; ++s) {
      for (std::size_t k = 0; k < x.size(); ++k) x[k] = stream.normal(s * width + k);
      out[s] = eval(x);
    }
  });
  return out;
}

BoundReport chaos_normal_bound(const ChaosFunctional& phi, ThetaChoice theta,
                            const RandomStream& stream, std::size_t samples,
                            const ChaosBoundOptions& options) {
  const Prepared prep = prepare(phi, options);
  const ChaosFunctional gamma = carre_functional(prep.phi);
  const std::size_t active = gamma.active_coordinates().size();

  BoundReport r;
  r.subject = "chaos";
  r.theta = theta;
  r.carre_mean = gamma.expectation();
  r.samples = samples;
  r.seed = stream.seed();
  if (prep.scale != 1.0) r.normalization_scale = prep.scale;
  r.tolerances = {{"center_tol", options.center_tol}, {"variance_tol", options.variance_tol}};

  if (active == 0) {
    r.e_abs_dev = std::abs(1.0 - gamma.expectation());
    r.method = "exact: Gamma is constant";
  } else if (active <= options.quadrature_max_coords && active <= 2) {
    r.e_abs_dev = e_abs_dev_quadrature(gamma, options.quadrature_tol);
    r.method = "adaptive Gauss-Kronrod over " + std::to_string(active) + " coordinate(s)";
    r.tolerances.push_back({"quadrature_abs_tol", options.quadrature_tol});
  } else {
    const MonteCarloEstimate mc = e_abs_dev_monte_carlo(gamma, stream, samples, options.threads);
    r.e_abs_dev = mc.mean;
    r.mc_e_abs_dev = mc.mean;
    r.mc_std_error = mc.std_error;
    r.method = "Monte Carlo over " + std::to_string(active) + " coordinates";
  }
  r.bound = theta.value * r.e_abs_dev;
  return r;
}

BoundReport bound_vs_empirical(const ChaosFunctional& phi, ThetaChoice theta,
                               const RandomStream& stream, std::size_t samples,
                               const ChaosBoundOptions& options) {
  if (theta.metric == Metric::total_variation) {
    throw PreconditionError("empirical comparison supports wasserstein and kolmogorov only");
  }
  if (samples < 2) throw DomainError("empirical comparison needs at least two samples");
  BoundReport r = chaos_normal_bound(phi, theta, stream, samples, options);
  const Prepared prep = prepare(phi, options);
  SampleSet draws(sample_functional(prep.phi, stream.substream(1), samples, options.threads));
  draws.sort();
  const DistanceReport d = distance_to_normal(draws, theta.metric, options.bootstrap_replicates,
                                              stream.substream(2), options.threads);
  r.empirical_distance = d.estimate;
  r.empirical_std_error = d.std_error;
  r.empirical_sampling_error = d.sampling_error;
  r.tolerances.push_back({"bootstrap_replicates", static_cast<double>(options.bootstrap_replicates)});
  if (options.assert_mode) {
    const double slack = 3.0 * d.sampling_error.value_or(0.0);
    r.assertion_passed = d.estimate <= r.bound + slack;
  }
  return r;
}

}  // namespace steinchaos
