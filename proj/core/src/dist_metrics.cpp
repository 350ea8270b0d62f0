#include "steinchaos/dist_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>

#include "steinchaos/errors.hpp"
#include "steinchaos/gauss_core.hpp"
#include "steinchaos/parallel.hpp"
#include "steinchaos/quadrature.hpp"

namespace steinchaos {

namespace {

// int_{-inf}^t Phi(s) ds
double phi_antiderivative(double t) { return t * std_normal_cdf(t) + std_normal_pdf(t); }

// int_a^b |c - Phi(t)| dt where Phi - c has at most one sign change on [a, b].
double ecdf_piece(double a, double b, double cdf_a, double cdf_b, double c) {
  const double ga = phi_antiderivative(a);
  const double gb = phi_antiderivative(b);
  if ((cdf_a < c) == (cdf_b < c)) return std::abs(c * (b - a) - (gb - ga));
  const double t = std::clamp(std_normal_quantile(c), a, b);
  const double gt = phi_antiderivative(t);
  return std::abs(c * (t - a) - (gt - ga)) + std::abs(c * (b - t) - (gb - gt));
}

// counts == nullptr means unit weight per observation.
double wasserstein_sorted(const std::vector<double>& x, const std::uint32_t* counts) {
  const double total = static_cast<double>(x.size());
  CompensatedSum acc;
  bool started = false;
  double prev = 0.0;
  double prev_cdf = 0.0;
  double cum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double weight = counts ? static_cast<double>(counts[i]) : 1.0;
    if (weight == 0.0) continue;
    const double y = x[i];
    if (!started) {
      acc.add(phi_antiderivative(y));
      started = true;
      prev = y;
      prev_cdf = std_normal_cdf(y);
      cum = weight;
      continue;
    }
    if (y > prev) {
      const double cdf_y = std_normal_cdf(y);
      acc.add(ecdf_piece(prev, y, prev_cdf, cdf_y, cum / total));
      prev = y;
      prev_cdf = cdf_y;
    }
    cum += weight;
  }
  // int_y^inf (1 - Phi)
  acc.add(std_normal_pdf(prev) - prev * std_normal_sf(prev));
  return acc.value();
}

double kolmogorov_sorted(const std::vector<double>& x, const std::uint32_t* counts) {
  const double total = static_cast<double>(x.size());
  double cum = 0.0;
  double worst = 0.0;
  std::size_t i = 0;
  while (i < x.size()) {
    const double y = x[i];
    const double before = cum / total;
    while (i < x.size() && x[i] == y) {
      cum += counts ? static_cast<double>(counts[i]) : 1.0;
      ++i;
    }
    const double after = cum / total;
    if (after == before) continue;
    const double cdf = std_normal_cdf(y);
    worst = std::max({worst, std::abs(after - cdf), std::abs(before - cdf)});
  }
  return worst;
}

}  // namespace

const char* to_string(Metric metric) {
  switch (metric) {
    case Metric::wasserstein:
      return "wasserstein";
    case Metric::kolmogorov:
      return "kolmogorov";
    case Metric::total_variation:
      return "total_variation";
  }
  return "unknown";
}

Metric parse_metric(const std::string& name) {
  if (name == "wasserstein" || name == "w") return Metric::wasserstein;
  if (name == "kolmogorov" || name == "ks" || name == "k") return Metric::kolmogorov;
  if (name == "total_variation" || name == "tv") return Metric::total_variation;
  throw ValidationError("unknown metric '" + name + "' (expected wasserstein, ks or tv)");
}

SampleSet::SampleSet(std::vector<double> values, bool sorted)
    : values_(std::move(values)), sorted_(sorted) {
  if (values_.empty()) throw DomainError("SampleSet: sample is empty");
  for (double v : values_) {
    if (!std::isfinite(v)) throw DomainError("SampleSet: non-finite value in sample");
  }
}

void SampleSet::sort() {
  if (!sorted_) {
    std::sort(values_.begin(), values_.end());
    sorted_ = true;
  }
}

SampleSet SampleSet::sorted_copy() const {
  SampleSet copy = *this;
  copy.sort();
  return copy;
}

DistanceReport wasserstein_to_normal(const SampleSet& sample) {
  if (sample.size() < 2) throw DomainError("wasserstein_to_normal: need at least two observations");
  const SampleSet s = sample.sorted() ? sample : sample.sorted_copy();
  DistanceReport r;
  r.metric = Metric::wasserstein;
  r.estimate = std::max(0.0, wasserstein_sorted(s.values(), nullptr));
  r.method = "exact piecewise integral of |F_n - Phi|";
  return r;
}

DistanceReport kolmogorov_to_normal(const SampleSet& sample) {
  const SampleSet s = sample.sorted() ? sample : sample.sorted_copy();
  DistanceReport r;
  r.metric = Metric::kolmogorov;
  r.estimate = std::min(1.0, kolmogorov_sorted(s.values(), nullptr));
  r.method = "one-sample Kolmogorov-Smirnov statistic";
  return r;
}

Density standardized_chi2_density(unsigned n) {
  if (n < 2) throw ValidationError("standardized chi^2 density needs n >= 2 (bounded density)");
  const double nd = static_cast<double>(n);
  const double scale = std::sqrt(2.0 * nd);
  const double half = 0.5 * nd;
  const double log_norm = half * std::log(2.0) + std::lgamma(half);
  Density d;
  d.name = "chi2(n=" + std::to_string(n) + ")";
  d.lower = -nd / scale;
  d.upper = std::numeric_limits<double>::infinity();
  d.pdf = [=](double w) {
    const double x = nd + scale * w;
    if (x <= 0.0) return (n == 2 && x == 0.0) ? 0.5 * scale : 0.0;
    return scale * std::exp((half - 1.0) * std::log(x) - 0.5 * x - log_norm);
  };
  return d;
}

Density shifted_normal_density(double delta) {
  Density d;
  std::ostringstream name;
  name << "normal(shift=" << delta << ")";
  d.name = name.str();
  d.lower = -std::numeric_limits<double>::infinity();
  d.upper = std::numeric_limits<double>::infinity();
  d.pdf = [delta](double t) { return std_normal_pdf(t - delta); };
  return d;
}

DistanceReport tv_to_normal_density(const Density& density, double abs_tol) {
  if (!density.pdf) throw ValidationError("tv_to_normal_density: density has no pdf");
  std::vector<double> br{density.lower};
  for (double b : density.breakpoints) {
    if (b > density.lower && b < density.upper) br.push_back(b);
  }
  // Splitting at 0 keeps the infinite-range maps centred on the bulk of both laws.
  if (0.0 > density.lower && 0.0 < density.upper) br.push_back(0.0);
  br.push_back(density.upper);
  std::sort(br.begin(), br.end());
  br.erase(std::unique(br.begin(), br.end()), br.end());

  const auto& p = density.pdf;
  const double mass = integrate_piecewise(p, br, 1e-11);
  if (std::abs(mass - 1.0) > 1e-8) {
    std::ostringstream msg;
    msg.precision(12);
    msg << "density " << density.name << " is not normalized: integral = " << mass;
    throw ValidationError(msg.str());
  }
  const double inside =
      integrate_piecewise([&p](double t) { return std::abs(p(t) - std_normal_pdf(t)); }, br,
                          0.5 * abs_tol, 20000);
  double outside = 0.0;
  if (std::isfinite(density.lower)) outside += std_normal_cdf(density.lower);
  if (std::isfinite(density.upper)) outside += std_normal_sf(density.upper);
  DistanceReport r;
  r.metric = Metric::total_variation;
  r.estimate = std::clamp(0.5 * (inside + outside), 0.0, 1.0);
  r.std_error = 0.0;
  r.method = "adaptive quadrature of |p - phi| / 2 for " + density.name;
  return r;
}

namespace {

// Distance between the reweighted ECDF and the unit-weight ECDF of the same sorted sample.
double resample_gap(const std::vector<double>& x, const std::uint32_t* counts, Metric metric) {
  const std::size_t n = x.size();
  const double inv_n = 1.0 / static_cast<double>(n);
  std::int64_t diff = 0;
  CompensatedSum area;
  double sup = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    diff += static_cast<std::int64_t>(counts[i]) - 1;
    const double gap = x[i + 1] - x[i];
    if (gap <= 0.0) continue;
    const double d = std::abs(static_cast<double>(diff)) * inv_n;
    area.add(d * gap);
    sup = std::max(sup, d);
  }
  return metric == Metric::wasserstein ? area.value() : sup;
}

}  // namespace

BootstrapSummary bootstrap_summary(const SampleSet& sample, Metric metric, std::size_t replicates,
                                   const RandomStream& stream, unsigned threads) {
  if (metric == Metric::total_variation) {
    throw CapabilityError("bootstrap: total variation needs a density, not a sample");
  }
  if (replicates < 2) throw DomainError("bootstrap: need at least two replicates");
  const SampleSet s = sample.sorted() ? sample : sample.sorted_copy();
  const std::size_t n = s.size();
  std::vector<double> estimates(replicates);
  std::vector<double> gaps(replicates);
  parallel_for(replicates, threads, [&](std::size_t r) {
    std::vector<std::uint32_t> counts(n, 0);
    const std::uint64_t base = static_cast<std::uint64_t>(r) * n;
    for (std::size_t j = 0; j < n; ++j) ++counts[stream.below(base + j, n)];
    estimates[r] = metric == Metric::wasserstein ? wasserstein_sorted(s.values(), counts.data())
                                                 : kolmogorov_sorted(s.values(), counts.data());
    gaps[r] = resample_gap(s.values(), counts.data(), metric);
  });
  MomentAccumulator acc;
  CompensatedSum gap_sum;
  for (std::size_t r = 0; r < replicates; ++r) {
    acc.add(estimates[r]);
    gap_sum.add(gaps[r]);
  }
  BootstrapSummary out;
  out.std_error = std::sqrt(acc.variance());
  out.sampling_error = gap_sum.value() / static_cast<double>(replicates);
  out.replicates = replicates;
  return out;
}

double bootstrap_std_error(const SampleSet& sample, Metric metric, std::size_t replicates,
                           const RandomStream& stream, unsigned threads) {
  return bootstrap_summary(sample, metric, replicates, stream, threads).std_error;
}

DistanceReport distance_to_normal(const SampleSet& sample, Metric metric,
                                  std::size_t bootstrap_replicates, const RandomStream& stream,
                                  unsigned threads) {
  const SampleSet s = sample.sorted() ? sample : sample.sorted_copy();
  DistanceReport r;
  switch (metric) {
    case Metric::wasserstein:
      r = wasserstein_to_normal(s);
      break;
    case Metric::kolmogorov:
      r = kolmogorov_to_normal(s);
      break;
    case Metric::total_variation:
      throw CapabilityError("total variation distance is only computed from a density");
  }
  if (bootstrap_replicates > 0) {
    const BootstrapSummary b = bootstrap_summary(s, metric, bootstrap_replicates, stream, threads);
    r.std_error = b.std_error;
    r.sampling_error = b.sampling_error;
  }
  return r;
}

}  // namespace steinchaos
