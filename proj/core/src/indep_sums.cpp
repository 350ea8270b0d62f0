#include "steinchaos/indep_sums.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include "json.hpp"
#include "steinchaos/errors.hpp"
#include "steinchaos/gauss_core.hpp"
#include "steinchaos/parallel.hpp"
#include "steinchaos/quadrature.hpp"

namespace steinchaos {

namespace {

constexpr std::size_t kSampleBlock = 4096;

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw DomainError(std::string(what) + " must be positive and finite");
  }
}

// int_{-1}^{1} (1 - g^2)^3 phi(g) dg, by a 40-point Gauss-Legendre rule (polynomial times an entire function).
double chi2_inner_cube() {
  static const double value = gauss_legendre_nodes(40, -1.0, 1.0).apply([](double g) {
    const double u = 1.0 - g * g;
    return u * u * u * std_normal_pdf(g);
  });
  return value;
}

}  // namespace

const char* to_string(DistKind kind) {
  switch (kind) {
    case DistKind::rademacher:
      return "rademacher";
    case DistKind::uniform:
      return "uniform";
    case DistKind::discrete:
      return "discrete";
    case DistKind::scaled_chi2_term:
      return "scaled_chi2_term";
  }
  return "unknown";
}

DistSpec DistSpec::rademacher(double scale) {
  require_positive(scale, "rademacher scale");
  DistSpec d;
  d.kind_ = DistKind::rademacher;
  d.scale_ = scale;
  d.var_ = scale * scale;
  d.abs1_ = scale;
  d.abs3_ = scale * scale * scale;
  d.points_ = {-scale, scale};
  d.probs_ = {0.5, 0.5};
  return d;
}

DistSpec DistSpec::uniform(double half_width) {
  require_positive(half_width, "uniform half_width");
  DistSpec d;
  d.kind_ = DistKind::uniform;
  d.scale_ = half_width;
  d.var_ = half_width * half_width / 3.0;
  d.abs1_ = half_width / 2.0;
  d.abs3_ = half_width * half_width * half_width / 4.0;
  return d;
}

DistSpec DistSpec::discrete(std::vector<double> points, std::vector<double> probs) {
  if (points.empty() || points.size() != probs.size()) {
    throw ValidationError("discrete: points and probs must be nonempty and of equal length");
  }
  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return points[a] < points[b]; });
  DistSpec d;
  d.kind_ = DistKind::discrete;
  CompensatedSum total;
  CompensatedSum mean;
  CompensatedSum var;
  CompensatedSum abs1;
  CompensatedSum abs3;
  for (std::size_t i : order) {
    const double x = points[i];
    const double p = probs[i];
    if (!std::isfinite(x) || !(p >= 0.0)) {
      throw ValidationError("discrete: points must be finite and probabilities nonnegative");
    }
    if (p == 0.0) continue;
    d.points_.push_back(x);
    d.probs_.push_back(p);
    total.add(p);
    d.cumulative_.push_back(total.value());
    mean.add(p * x);
    var.add(p * x * x);
    abs1.add(p * std::abs(x));
    abs3.add(p * std::abs(x) * x * x);
  }
  if (std::abs(total.value() - 1.0) > 1e-12) {
    throw ValidationError("discrete: probabilities must sum to 1");
  }
  if (std::abs(mean.value()) > 1e-12) throw ValidationError("discrete: law must have mean 0");
  d.var_ = var.value();
  d.abs1_ = abs1.value();
  d.abs3_ = abs3.value();
  if (!(d.var_ > 0.0)) throw ValidationError("discrete: law must have positive variance");
  d.cumulative_.back() = 1.0;
  return d;
}

DistSpec DistSpec::scaled_chi2_term(double scale) {
  require_positive(scale, "scaled_chi2_term scale");
  DistSpec d;
  d.kind_ = DistKind::scaled_chi2_term;
  d.scale_ = scale;
  d.var_ = 2.0 * scale * scale;
  d.abs1_ = scale * 4.0 * std_normal_pdf(1.0);
  // E|G^2 - 1|^3 = E(G^2 - 1)^3 + 2 E[(1 - G^2)^3; |G| < 1] = 8 + 2 * inner
  d.abs3_ = scale * scale * scale * (8.0 + 2.0 * chi2_inner_cube());
  return d;
}

double DistSpec::support_lower() const {
  switch (kind_) {
    case DistKind::uniform:
      return -scale_;
    case DistKind::scaled_chi2_term:
      return -scale_;
    default:
      return points_.front();
  }
}

double DistSpec::support_upper() const {
  switch (kind_) {
    case DistKind::uniform:
      return scale_;
    case DistKind::scaled_chi2_term:
      return std::numeric_limits<double>::infinity();
    default:
      return points_.back();
  }
}

double DistSpec::sample(const RandomStream& stream, std::uint64_t index) const {
  switch (kind_) {
    case DistKind::rademacher:
      return (stream.bits(index) >> 63) ? scale_ : -scale_;
    case DistKind::uniform:
      return scale_ * (2.0 * stream.uniform(index) - 1.0);
    case DistKind::discrete: {
      const double u = stream.uniform(index);
      const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
      const auto k = std::min<std::size_t>(static_cast<std::size_t>(it - cumulative_.begin()),
                                           points_.size() - 1);
      return points_[k];
    }
    case DistKind::scaled_chi2_term: {
      const double g = stream.normal(index);
      return scale_ * (g * g - 1.0);
    }
  }
  return 0.0;
}

double k_kernel(const DistSpec& dist, double t) {
  if (std::isnan(t)) throw DomainError("k_kernel: t is NaN");
  switch (dist.kind()) {
    case DistKind::rademacher:
    case DistKind::discrete: {
      double k = 0.0;
      const auto& xs = dist.points();
      const auto& ps = dist.probs();
      for (std::size_t i = 0; i < xs.size(); ++i) {
        if (t > 0.0 && xs[i] > t) k += ps[i] * xs[i];
        if (t < 0.0 && xs[i] < t) k -= ps[i] * xs[i];
      }
      return k;
    }
    case DistKind::uniform: {
      const double a = dist.scale();
      if (std::abs(t) >= a) return 0.0;
      return (a * a - t * t) / (4.0 * a);
    }
    case DistKind::scaled_chi2_term: {
      // X = s (G^2 - 1): K(t) = 2 s a phi(a), a = sqrt(1 + t/s), for t > -s.
      const double s = dist.scale();
      if (t <= -s) return 0.0;
      const double a = std::sqrt(1.0 + t / s);
      return 2.0 * s * a * std_normal_pdf(a);
    }
  }
  throw CapabilityError("k_kernel: unsupported distribution kind");
}

KernelMoments k_kernel_moments(const DistSpec& dist) {
  std::vector<double> br{dist.support_lower(), 0.0, dist.support_upper()};
  br.insert(br.end(), dist.points().begin(), dist.points().end());
  std::sort(br.begin(), br.end());
  br.erase(std::unique(br.begin(), br.end()), br.end());
  KernelMoments m;
  m.mass = integrate_piecewise([&dist](double t) { return k_kernel(dist, t); }, br, 1e-13);
  m.first_abs = integrate_piecewise(
      [&dist](double t) { return std::abs(t) * k_kernel(dist, t); }, br, 1e-13);
  return m;
}

IndepSumModel::IndepSumModel(std::vector<DistSpec> terms) : terms_(std::move(terms)) {
  if (terms_.empty()) throw ValidationError("IndepSumModel: model has no terms");
  CompensatedSum total;
  for (const auto& t : terms_) total.add(t.variance());
  if (std::abs(total.value() - 1.0) > 1e-12) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "IndepSumModel: variances must sum to 1 (got " << total.value() << ")";
    throw ValidationError(msg.str());
  }
}

IndepSumModel IndepSumModel::rademacher_iid(std::size_t n) {
  if (n == 0) throw DomainError("rademacher_iid: n must be positive");
  return IndepSumModel(
      std::vector<DistSpec>(n, DistSpec::rademacher(1.0 / std::sqrt(static_cast<double>(n)))));
}

IndepSumModel IndepSumModel::uniform_iid(std::size_t n) {
  if (n == 0) throw DomainError("uniform_iid: n must be positive");
  return IndepSumModel(std::vector<DistSpec>(
      n, DistSpec::uniform(std::sqrt(3.0 / static_cast<double>(n)))));
}

IndepSumModel IndepSumModel::chi2(std::size_t n) {
  if (n == 0) throw DomainError("chi2: n must be positive");
  return IndepSumModel(std::vector<DistSpec>(
      n, DistSpec::scaled_chi2_term(1.0 / std::sqrt(2.0 * static_cast<double>(n)))));
}

double wasserstein_bound_indep(const IndepSumModel& model) {
  CompensatedSum acc;
  for (const auto& t : model.terms()) acc.add(t.abs3());
  return 3.0 * acc.value();
}

SampleSet simulate_sum(const IndepSumModel& model, const RandomStream& stream,
                       std::size_t samples, unsigned threads) {
  if (samples == 0) throw DomainError("simulate_sum: need at least one sample");
  const auto& terms = model.terms();
  const std::uint64_t width = terms.size();
  std::vector<double> out(samples);
  const std::size_t blocks = (samples + kSampleBlock - 1) / kSampleBlock;
  parallel_for(blocks, threads, [&](std::size_t b) {
    const std::size_t end = std::min(samples, (b + 1) * kSampleBlock);
    for (std::size_t s = b * kSampleBlock; s < end; ++s) {
      const std::uint64_t base = static_cast<std::uint64_t>(s) * width;
      double w = 0.0;
      for (std::uint64_t k = 0; k < width; ++k) w += terms[k].sample(stream, base + k);
      out[s] = w;
    }
  });
  return SampleSet(std::move(out));
}

namespace {

double number_field(const nlohmann::json& obj, const std::string& key, const std::string& path) {
  if (!obj.contains(key)) throw ValidationError(path + "." + key + ": missing");
  const auto& v = obj.at(key);
  if (!v.is_number()) throw ValidationError(path + "." + key + ": expected a number");
  return v.get<double>();
}

std::vector<double> number_list(const nlohmann::json& obj, const std::string& key,
                                const std::string& path) {
  if (!obj.contains(key) || !obj.at(key).is_array()) {
    throw ValidationError(path + "." + key + ": expected a list of numbers");
  }
  std::vector<double> out;
  for (const auto& v : obj.at(key)) {
    if (!v.is_number()) throw ValidationError(path + "." + key + ": expected a list of numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

std::string describe_parse_error(const std::string& text, const nlohmann::json::parse_error& e) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  std::ostringstream msg;
  msg << "JSON syntax error at line " << line << ", column " << column << ": " << e.what();
  return msg.str();
}

}  // namespace

IndepSumModel parse_model_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(describe_parse_error(text, e));
  }
  if (!doc.is_array()) throw ValidationError("model: top level must be a JSON list of terms");
  std::vector<DistSpec> terms;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const std::string path = "terms[" + std::to_string(i) + "]";
    const auto& item = doc[i];
    if (!item.is_object() || !item.contains("kind") || !item["kind"].is_string()) {
      throw ValidationError(path + ".kind: missing or not a string");
    }
    const std::string kind = item["kind"].get<std::string>();
    const nlohmann::json params = item.value("params", nlohmann::json::object());
    if (!params.is_object()) throw ValidationError(path + ".params: expected an object");
    std::size_t repeat = 1;
    if (item.contains("repeat")) {
      if (!item["repeat"].is_number_unsigned() || item["repeat"].get<std::size_t>() == 0) {
        throw ValidationError(path + ".repeat: expected a positive integer");
      }
      repeat = item["repeat"].get<std::size_t>();
    }
    const std::string ppath = path + ".params";
    DistKind dk;
    if (kind == "rademacher") {
      dk = DistKind::rademacher;
    } else if (kind == "uniform") {
      dk = DistKind::uniform;
    } else if (kind == "discrete") {
      dk = DistKind::discrete;
    } else if (kind == "scaled_chi2_term") {
      dk = DistKind::scaled_chi2_term;
    } else {
      throw ValidationError(path + ".kind: unknown kind '" + kind + "'");
    }
    const char* scalar_key = dk == DistKind::uniform ? "half_width" : "scale";
    const double scalar = dk == DistKind::discrete ? 0.0 : number_field(params, scalar_key, ppath);
    std::vector<double> points;
    std::vector<double> probs;
    if (dk == DistKind::discrete) {
      points = number_list(params, "points", ppath);
      probs = number_list(params, "probs", ppath);
    }
    try {
      DistSpec d = [&] {
        switch (dk) {
          case DistKind::rademacher:
            return DistSpec::rademacher(scalar);
          case DistKind::uniform:
            return DistSpec::uniform(scalar);
          case DistKind::discrete:
            return DistSpec::discrete(std::move(points), std::move(probs));
          case DistKind::scaled_chi2_term:
            break;
        }
        return DistSpec::scaled_chi2_term(scalar);
      }();
      terms.insert(terms.end(), repeat, d);
    } catch (const Error& e) {
      throw ValidationError(path + ": " + e.what());
    }
  }
  return IndepSumModel(std::move(terms));
}

IndepSumModel load_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open model file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_model_json(buf.str());
}

}  // namespace steinchaos
