#include "steinchaos/gauss_functional.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>
#include <vector>

#include "steinchaos/errors.hpp"
#include "steinchaos/gauss_core.hpp"
#include "steinchaos/parallel.hpp"

namespace steinchaos {

namespace {

constexpr std::size_t kMomentNodes = 64;
constexpr std::size_t kMcBlock = 1024;

const QuadratureRule& moment_rule() {
  static const QuadratureRule rule = gauss_hermite_nodes(kMomentNodes);
  return rule;
}

}  // namespace

ThetaChoice theta_for(Metric metric) {
  switch (metric) {
    case Metric::wasserstein:
      return {metric, std::sqrt(2.0 / kPi)};
    case Metric::kolmogorov:
      return {metric, 1.0};
    case Metric::total_variation:
      return {metric, 2.0};
  }
  throw DomainError("theta_for: unknown metric");
}

SmoothFunctional::SmoothFunctional(std::string name, Fn eval, Fn deriv, unsigned growth_degree)
    : name_(std::move(name)),
      eval_(std::move(eval)),
      deriv_(std::move(deriv)),
      growth_degree_(growth_degree) {
  if (!eval_ || !deriv_) throw DomainError("SmoothFunctional: psi and psi' are both required");
}

SmoothFunctional SmoothFunctional::identity() {
  return SmoothFunctional(
      "identity", [](double x) { return x; }, [](double) { return 1.0; }, 0);
}

SmoothFunctional SmoothFunctional::chi2_term(unsigned n) {
  if (n == 0) throw DomainError("chi2_term: n must be positive");
  const double c = std::sqrt(2.0 * static_cast<double>(n));
  return SmoothFunctional(
      "chi2(n=" + std::to_string(n) + ")", [c](double x) { return (x * x - 1.0) / c; },
      [c](double x) { return 2.0 * x / c; }, 1);
}

SmoothFunctional SmoothFunctional::builtin(const std::string& name, unsigned n) {
  std::string key = name;
  if (key.rfind("builtin:", 0) == 0) key = key.substr(8);
  if (key == "identity") return identity();
  if (key == "chi2") return chi2_term(n);
  throw ValidationError("unknown builtin functional '" + name + "' (expected identity or chi2)");
}

double SmoothFunctional::mean() const {
  return moment_rule().apply([this](double z) { return eval_(z); });
}

double SmoothFunctional::variance() const {
  const double m = mean();
  return moment_rule().apply([this, m](double z) {
    const double d = eval_(z) - m;
    return d * d;
  });
}

bool SmoothFunctional::standardized(double tol) const {
  return std::abs(mean()) <= tol && std::abs(variance() - 1.0) <= tol;
}

double interp_T(const SmoothFunctional& psi, double x, const QuadratureRule& rule_t,
                const QuadratureRule& rule_z) {
  if (!std::isfinite(x)) throw DomainError("interp_T: x must be finite");
  const double dx = psi.deriv(x);
  CompensatedSum acc;
  for (std::size_t i = 0; i < rule_t.size(); ++i) {
    const double u = rule_t.nodes[i];
    const double v = std::sqrt(std::max(0.0, 1.0 - u * u));
    const double inner = rule_z.apply([&](double z) { return psi.deriv(u * x + v * z); });
    acc.add(rule_t.weights[i] * inner);
  }
  return dx * acc.value();
}

namespace {

struct RulePair {
  QuadratureRule coarse_t, coarse_z, fine_t, fine_z;
  explicit RulePair(const InterpolationRules& r)
      : coarse_t(gauss_legendre_nodes(r.t_nodes, 0.0, 1.0)),
        coarse_z(gauss_hermite_nodes(r.z_nodes)),
        fine_t(gauss_legendre_nodes(2 * r.t_nodes, 0.0, 1.0)),
        fine_z(gauss_hermite_nodes(2 * r.z_nodes)) {}
};

double stable_T(const SmoothFunctional& psi, double x, const RulePair& rules,
                const InterpolationRules& sizes) {
  const double coarse = interp_T(psi, x, rules.coarse_t, rules.coarse_z);
  const double fine = interp_T(psi, x, rules.fine_t, rules.fine_z);
  const double scale = std::max(1.0, std::abs(fine));
  if (!(std::abs(fine - coarse) <= sizes.stability_tol * scale)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "interp_T not stable under node doubling at x = " << x << ": " << coarse << " ("
        << sizes.t_nodes << "x" << sizes.z_nodes << " nodes) vs " << fine << " ("
        << 2 * sizes.t_nodes << "x" << 2 * sizes.z_nodes << " nodes)";
    throw AccuracyError(msg.str());
  }
  return fine;
}

}  // namespace

double interp_T_stable(const SmoothFunctional& psi, double x, const InterpolationRules& rules) {
  return stable_T(psi, x, RulePair(rules), rules);
}

double interp_T_variance(const SmoothFunctional& psi, const InterpolationRules& rules) {
  const auto& rule = moment_rule();
  const RulePair pair(rules);
  std::vector<double> t(rule.size());
  for (std::size_t k = 0; k < rule.size(); ++k) t[k] = stable_T(psi, rule.nodes[k], pair, rules);
  CompensatedSum m1;
  for (std::size_t k = 0; k < rule.size(); ++k) m1.add(rule.weights[k] * t[k]);
  const double mean = m1.value();
  CompensatedSum m2;
  for (std::size_t k = 0; k < rule.size(); ++k) m2.add(rule.weights[k] * (t[k] - mean) * (t[k] - mean));
  return m2.value();
}

BoundReport bound_theta_E1mT(const SmoothFunctional& psi, ThetaChoice theta,
                             const RandomStream& stream, const GaussBoundOptions& options) {
  if (!psi.standardized()) {
    throw PreconditionError("bound_theta_E1mT: psi(Z) must have mean 0 and variance 1");
  }
  const RulePair pair(options.rules);
  const auto integrand = [&](double z) {
    const double w = std_normal_pdf(z);
    if (w == 0.0) return 0.0;
    return std::abs(1.0 - stable_T(psi, z, pair, options.rules)) * w;
  };
  const double e_abs =
      integrate_piecewise(integrand, {-std::numeric_limits<double>::infinity(), 0.0,
                                      std::numeric_limits<double>::infinity()},
                          options.outer_tol);

  BoundReport r;
  r.subject = psi.name();
  r.theta = theta;
  r.e_abs_dev = e_abs;
  r.bound = theta.value * e_abs;
  r.samples = options.mc_samples;
  r.seed = stream.seed();
  r.method = "outer adaptive Gauss-Kronrod; T by Gauss-Legendre x Gauss-Hermite";

  if (options.mc_samples > 0) {
    const QuadratureRule rule_t = gauss_legendre_nodes(options.rules.t_nodes, 0.0, 1.0);
    const QuadratureRule rule_z = gauss_hermite_nodes(options.rules.z_nodes);
    const std::size_t blocks = (options.mc_samples + kMcBlock - 1) / kMcBlock;
    std::vector<MomentAccumulator> parts(blocks);
    parallel_for(blocks, options.threads, [&](std::size_t b) {
      const std::size_t end = std::min(options.mc_samples, (b + 1) * kMcBlock);
      for (std::size_t s = b * kMcBlock; s < end; ++s) {
        parts[b].add(std::abs(1.0 - interp_T(psi, stream.normal(s), rule_t, rule_z)));
      }
    });
    MomentAccumulator total;
    for (const auto& p : parts) total.merge(p);
    r.mc_e_abs_dev = total.mean;
    r.mc_std_error = total.std_error();
  }
  r.tolerances = {{"outer_abs_tol", options.outer_tol},
                  {"interp_stability_tol", options.rules.stability_tol},
                  {"t_nodes", static_cast<double>(options.rules.t_nodes)},
                  {"z_nodes", static_cast<double>(options.rules.z_nodes)}};
  return r;
}

double chi2_mean_abs_deviation(unsigned n) {
  if (n == 0) throw DomainError("chi2_mean_abs_deviation: n must be positive");
  const double k = 0.5 * static_cast<double>(n);
  return 4.0 * std::exp(k * std::log(k) - k - std::lgamma(k)) / static_cast<double>(n);
}

Chi2Bounds chi2_bounds(unsigned n) {
  if (n == 0) throw DomainError("chi2_bounds: n must be positive");
  Chi2Bounds b;
  b.n = n;
  b.var_T = 2.0 / static_cast<double>(n);
  const double root = std::sqrt(b.var_T);
  b.d_W = theta_for(Metric::wasserstein).value * root;
  b.d_K = root;
  b.d_TV = 2.0 * root;
  b.e_abs_dev = chi2_mean_abs_deviation(n);
  return b;
}

}  // namespace steinchaos
