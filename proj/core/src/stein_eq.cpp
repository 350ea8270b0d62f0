#include "steinchaos/stein_eq.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "steinchaos/errors.hpp"
#include "steinchaos/gauss_core.hpp"
#include "steinchaos/parallel.hpp"
#include "steinchaos/quadrature.hpp"
#include "steinchaos/random_stream.hpp"

namespace steinchaos {

namespace {

// exp(-s^2/2) < 1e-42 beyond this shift, which dominates any linear growth of h.
constexpr double kShiftReach = 14.0;
constexpr std::size_t kGridBlock = 1024;

}  // namespace

const char* to_string(TestFunctionKind kind) {
  switch (kind) {
    case TestFunctionKind::bounded:
      return "bounded";
    case TestFunctionKind::lipschitz:
      return "lipschitz";
    case TestFunctionKind::indicator:
      return "indicator";
    case TestFunctionKind::smoothed_indicator:
      return "smoothed_indicator";
  }
  return "unknown";
}

TestFunction TestFunction::indicator(double x) {
  if (!std::isfinite(x)) throw DomainError("indicator: threshold must be finite");
  TestFunction t;
  t.kind_ = TestFunctionKind::indicator;
  std::ostringstream name;
  name << "indicator(x=" << x << ")";
  t.name_ = name.str();
  t.h_ = [x](double w) { return w <= x ? 1.0 : 0.0; };
  t.inf_ = 0.0;
  t.sup_ = 1.0;
  t.kinks_ = {x};
  t.x_ = x;
  return t;
}

TestFunction TestFunction::smoothed_indicator(double x, double eps) {
  if (!std::isfinite(x) || !(eps > 0.0) || !std::isfinite(eps)) {
    throw DomainError("smoothed_indicator: need finite x and eps > 0");
  }
  TestFunction t;
  t.kind_ = TestFunctionKind::smoothed_indicator;
  std::ostringstream name;
  name << "smoothed_indicator(x=" << x << ",eps=" << eps << ")";
  t.name_ = name.str();
  t.h_ = [x, eps](double w) {
    if (w <= x) return 1.0;
    if (w >= x + eps) return 0.0;
    return 1.0 + (x - w) / eps;
  };
  t.dh_ = [x, eps](double w) { return (w > x && w < x + eps) ? -1.0 / eps : 0.0; };
  t.lip_ = 1.0 / eps;
  t.inf_ = 0.0;
  t.sup_ = 1.0;
  t.kinks_ = {x, x + eps};
  t.x_ = x;
  t.eps_ = eps;
  return t;
}

TestFunction TestFunction::lipschitz(std::string name, Fn h, Fn dh, double lip_const,
                                     std::vector<double> kinks, bool smooth) {
  if (!h || !dh) throw ValidationError("lipschitz test function needs h and h'");
  if (!(lip_const >= 0.0)) throw DomainError("lipschitz: constant must be nonnegative");
  TestFunction t;
  t.kind_ = TestFunctionKind::lipschitz;
  t.name_ = std::move(name);
  t.h_ = std::move(h);
  t.dh_ = std::move(dh);
  t.lip_ = lip_const;
  t.kinks_ = std::move(kinks);
  std::sort(t.kinks_.begin(), t.kinks_.end());
  t.smooth_ = smooth;
  return t;
}

TestFunction TestFunction::bounded(std::string name, Fn h, double inf_value, double sup_value,
                                   std::vector<double> kinks, bool smooth) {
  if (!h) throw ValidationError("bounded test function needs h");
  if (!(inf_value <= sup_value)) throw DomainError("bounded: need inf <= sup");
  TestFunction t;
  t.kind_ = TestFunctionKind::bounded;
  t.name_ = std::move(name);
  t.h_ = std::move(h);
  t.inf_ = inf_value;
  t.sup_ = sup_value;
  t.kinks_ = std::move(kinks);
  std::sort(t.kinks_.begin(), t.kinks_.end());
  t.smooth_ = smooth;
  return t;
}

double TestFunction::derivative(double w) const {
  if (!dh_) throw CapabilityError("test function " + name_ + " has no derivative");
  return dh_(w);
}

double TestFunction::normal_expectation() const {
  switch (kind_) {
    case TestFunctionKind::indicator:
      return std_normal_cdf(x_);
    case TestFunctionKind::smoothed_indicator: {
      const double lo = std_normal_cdf(x_);
      const double hi = std_normal_cdf(x_ + eps_);
      return lo + (1.0 + x_ / eps_) * (hi - lo) -
             (std_normal_pdf(x_) - std_normal_pdf(x_ + eps_)) / eps_;
    }
    default:
      break;
  }
  if (smooth_) {
    static const QuadratureRule rule = gauss_hermite_nodes(64);
    return rule.apply(h_);
  }
  std::vector<double> br{-std::numeric_limits<double>::infinity()};
  br.insert(br.end(), kinks_.begin(), kinks_.end());
  br.push_back(std::numeric_limits<double>::infinity());
  const auto& h = h_;
  return integrate_piecewise([&h](double t) { return h(t) * std_normal_pdf(t); }, br, 1e-14);
}

SteinSolution::SteinSolution(TestFunction h, double quad_tol)
    : h_(std::move(h)), eh_z_(h_.normal_expectation()), quad_tol_(quad_tol) {}

double SteinSolution::f_by_quadrature(double w) const {
  if (!std::isfinite(w)) throw DomainError("SteinSolution: w must be finite");
  const double eh = eh_z_;
  const TestFunction& h = h_;
  std::vector<double> br{0.0};
  // The weight exp(-|w| s - s^2/2) lives on s = O(1/|w|); split there so large |w| is resolved.
  for (double c : {1.0, 8.0, 40.0}) {
    const double s = c / std::abs(w);
    if (s < kShiftReach) br.push_back(s);
  }
  if (w <= 0.0) {
    for (double k : h.kinks()) {
      const double s = w - k;
      if (s > 0.0 && s < kShiftReach) br.push_back(s);
    }
    br.push_back(kShiftReach);
    std::sort(br.begin(), br.end());
    br.erase(std::unique(br.begin(), br.end()), br.end());
    return integrate_piecewise(
        [&](double s) { return std::exp(w * s - 0.5 * s * s) * (h(w - s) - eh); }, br, quad_tol_);
  }
  for (double k : h.kinks()) {
    const double s = k - w;
    if (s > 0.0 && s < kShiftReach) br.push_back(s);
  }
  br.push_back(kShiftReach);
  std::sort(br.begin(), br.end());
  br.erase(std::unique(br.begin(), br.end()), br.end());
  return -integrate_piecewise(
      [&](double s) { return std::exp(-w * s - 0.5 * s * s) * (h(w + s) - eh); }, br, quad_tol_);
}

double SteinSolution::f(double w) const {
  if (!std::isfinite(w)) throw DomainError("SteinSolution: w must be finite");
  if (h_.kind() == TestFunctionKind::indicator) {
    const double x = h_.threshold();
    if (w <= x) return std_normal_sf(x) * mills_ratio(-w);
    return std_normal_cdf(x) * mills_ratio(w);
  }
  return f_by_quadrature(w);
}

double SteinSolution::fprime(double w) const { return w * f(w) + h_(w) - eh_z_; }

double SteinSolution::fsecond(double w) const {
  const double fw = f(w);
  const double fp = w * fw + h_(w) - eh_z_;
  return fw + w * fp + h_.derivative(w);
}

double SteinSolution::residual(double w) const {
  return fprime(w) - w * f(w) - (h_(w) - eh_z_);
}

SteinSolution solve_stein(const TestFunction& h) { return SteinSolution(h); }

bool ConstantsReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const ConstantCheck& c) { return !c.applicable || c.pass; });
}

std::vector<double> make_grid(double lo, double hi, double step) {
  if (!(step > 0.0) || !(lo <= hi)) throw DomainError("make_grid: need lo <= hi and step > 0");
  const auto n = static_cast<std::size_t>(std::llround((hi - lo) / step));
  std::vector<double> grid(n + 1);
  for (std::size_t i = 0; i <= n; ++i) grid[i] = lo + static_cast<double>(i) * step;
  grid.back() = hi;
  return grid;
}

ConstantsReport verify_constants(const TestFunction& h, const std::vector<double>& grid,
                                 unsigned threads, double slack) {
  if (grid.size() < 2) throw ValidationError("verify_constants: grid needs at least two points");
  std::vector<double> sorted = grid;
  std::sort(sorted.begin(), sorted.end());
  double max_gap = 0.0;
  for (std::size_t i = 1; i < sorted.size(); ++i) max_gap = std::max(max_gap, sorted[i] - sorted[i - 1]);
  if (sorted.front() > -10.0 || sorted.back() < 10.0 || max_gap > 1e-3 * (1.0 + 1e-9)) {
    throw ValidationError("verify_constants: grid must cover [-10, 10] with spacing <= 1e-3");
  }

  const SteinSolution sol(h);
  const double eh = sol.eh_z();
  const bool second = h.has_derivative();
  const std::size_t n = sorted.size();
  std::vector<double> f(n);
  std::vector<double> fp(n);
  std::vector<double> fpp(second ? n : 0);
  const std::size_t blocks = (n + kGridBlock - 1) / kGridBlock;
  parallel_for(blocks, threads, [&](std::size_t b) {
    const std::size_t end = std::min(n, (b + 1) * kGridBlock);
    for (std::size_t i = b * kGridBlock; i < end; ++i) {
      const double w = sorted[i];
      f[i] = sol.f(w);
      fp[i] = w * f[i] + h(w) - eh;
      if (second) fpp[i] = f[i] + w * fp[i] + h.derivative(w);
    }
  });

  auto sup_abs = [](const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
  };
  double f_max = -std::numeric_limits<double>::infinity();
  double f_min = std::numeric_limits<double>::infinity();
  double fp_max = -std::numeric_limits<double>::infinity();
  double fp_min = std::numeric_limits<double>::infinity();
  double wf_sup = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    f_max = std::max(f_max, f[i]);
    f_min = std::min(f_min, f[i]);
    fp_max = std::max(fp_max, fp[i]);
    fp_min = std::min(fp_min, fp[i]);
    wf_sup = std::max(wf_sup, std::abs(sorted[i] * f[i]));
  }

  ConstantsReport report;
  report.function_name = h.name();
  report.slack = slack;
  auto add = [&](std::string quantity, std::string label, double observed, double bound,
                 bool applicable, std::string relation = "<=") {
    ConstantCheck c;
    c.quantity = std::move(quantity);
    c.inequality = std::move(label);
    c.observed = observed;
    c.bound = bound;
    c.relation = std::move(relation);
    c.applicable = applicable;
    if (applicable) {
      c.pass = c.relation == "<" ? observed < bound : observed <= bound + slack;
    }
    report.checks.push_back(std::move(c));
  };

  const bool is_bounded = h.inf_value().has_value() && h.sup_value().has_value();
  const double centered_sup =
      is_bounded ? std::max(*h.sup_value() - eh, eh - *h.inf_value()) : 0.0;
  add("sup|f|", "bd-bounded", sup_abs(f), std::sqrt(kPi / 2.0) * centered_sup, is_bounded);
  add("sup|f'|", "bd-bounded", sup_abs(fp), 2.0 * centered_sup, is_bounded);

  const bool is_lipschitz = h.lip_const().has_value() && second;
  const double lip = is_lipschitz ? *h.lip_const() : 0.0;
  add("sup|f|", "bd-abs-cont", sup_abs(f), 2.0 * lip, is_lipschitz);
  add("sup|f'|", "bd-abs-cont", sup_abs(fp), std::sqrt(2.0 / kPi) * lip, is_lipschitz);
  add("sup|f''|", "bd-abs-cont", second ? sup_abs(fpp) : 0.0, 2.0 * lip, is_lipschitz);

  const bool is_indicator = h.kind() == TestFunctionKind::indicator;
  add("-inf f", "bd-indicator-1", -f_min, 0.0, is_indicator, "<");
  add("sup f", "bd-indicator-1", f_max, kSqrt2Pi / 4.0, is_indicator);
  add("sup|w f|", "bd-indicator-1", wf_sup, 1.0, is_indicator);
  add("sup|f'|", "bd-indicator-1", sup_abs(fp), 1.0, is_indicator);
  add("sup f' - inf f'", "bd-indicator-2", fp_max - fp_min, 1.0, is_indicator);

  const RandomStream stream(0x5731E1ULL, 0);
  if (is_indicator) {
    // sup over sampled (w, u, v) of |(w+u)f(w+u) - (w+v)f(w+v)| - (|w| + sqrt(2 pi)/4)(|u|+|v|)
    constexpr std::size_t kTriples = 20000;
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < kTriples; ++k) {
      const double w = -10.0 + 20.0 * stream.uniform(3 * k);
      const double u = -3.0 + 6.0 * stream.uniform(3 * k + 1);
      const double v = -3.0 + 6.0 * stream.uniform(3 * k + 2);
      const double lhs = std::abs((w + u) * sol.f(w + u) - (w + v) * sol.f(w + v));
      const double rhs = (std::abs(w) + kSqrt2Pi / 4.0) * (std::abs(u) + std::abs(v));
      worst = std::max(worst, lhs - rhs);
    }
    add("sup(lhs - rhs) over sampled (w,u,v)", "indicator-bd-4", worst, 0.0, true);
  } else {
    add("sup(lhs - rhs) over sampled (w,u,v)", "indicator-bd-4", 0.0, 0.0, false);
  }

  const bool is_smoothed = h.kind() == TestFunctionKind::smoothed_indicator;
  add("-inf f", "f_{x,eps}-bd-1", -f_min, 0.0, is_smoothed);
  add("sup f", "f_{x,eps}-bd-1", f_max, 1.0, is_smoothed);
  add("sup|f'|", "f_{x,eps}-bd-1", sup_abs(fp), 1.0, is_smoothed);
  add("sup f' - inf f'", "f_{x,eps}-bd-1", fp_max - fp_min, 1.0, is_smoothed);
  if (is_smoothed) {
    const double x = h.threshold();
    const double eps = h.epsilon();
    constexpr std::size_t kPairs = 4000;
    std::vector<double> excess(kPairs);
    parallel_for(kPairs / 250, threads, [&](std::size_t b) {
      for (std::size_t k = b * 250; k < (b + 1) * 250; ++k) {
        const double w = -10.0 + 20.0 * stream.uniform(2 * k);
        const double t = -3.0 + 6.0 * stream.uniform(2 * k + 1);
        const double lhs = std::abs(sol.fprime(w + t) - sol.fprime(w));
        const bool in_window =
            x - std::max(t, 0.0) <= w && w <= x - std::min(t, 0.0) + eps;
        const double rhs = (std::abs(w) + 1.0) * std::abs(t) + (in_window ? 1.0 : 0.0);
        excess[k] = lhs - rhs;
      }
    });
    add("sup(lhs - rhs) over sampled (w,t)", "f_{x,eps}-bd-2",
        *std::max_element(excess.begin(), excess.end()), 0.0, true);
  } else {
    add("sup(lhs - rhs) over sampled (w,t)", "f_{x,eps}-bd-2", 0.0, 0.0, false);
  }
  return report;
}

std::vector<TestFunction> builtin_test_functions(const std::string& family) {
  std::vector<TestFunction> out;
  const bool all = family == "all";
  if (all || family == "indicator") {
    for (double x : {-2.0, -1.0, 0.0, 1.0, 2.0}) out.push_back(TestFunction::indicator(x));
  }
  if (all || family == "smoothed") {
    out.push_back(TestFunction::smoothed_indicator(-1.0, 0.5));
    out.push_back(TestFunction::smoothed_indicator(0.0, 0.1));
    out.push_back(TestFunction::smoothed_indicator(0.0, 1.0));
    out.push_back(TestFunction::smoothed_indicator(1.0, 0.25));
  }
  if (all || family == "lipschitz") {
    out.push_back(TestFunction::lipschitz(
        "identity", [](double w) { return w; }, [](double) { return 1.0; }, 1.0, {}, true));
    out.push_back(TestFunction::lipschitz(
        "abs", [](double w) { return std::abs(w); },
        [](double w) { return w < 0.0 ? -1.0 : 1.0; }, 1.0, {0.0}));
    out.push_back(TestFunction::lipschitz(
        "sin", [](double w) { return std::sin(w); }, [](double w) { return std::cos(w); }, 1.0,
        {}, true));
    out.push_back(TestFunction::lipschitz(
        "clip", [](double w) { return std::clamp(w, -1.0, 1.0); },
        [](double w) { return (w > -1.0 && w < 1.0) ? 1.0 : 0.0; }, 1.0, {-1.0, 1.0}));
    out.push_back(TestFunction::lipschitz(
        "ramp", [](double w) { return std::max(w - 0.5, 0.0); },
        [](double w) { return w > 0.5 ? 1.0 : 0.0; }, 1.0, {0.5}));
  }
  if (all || family == "bounded") {
    out.push_back(TestFunction::bounded(
        "cos", [](double w) { return std::cos(w); }, -1.0, 1.0, {}, true));
    out.push_back(TestFunction::bounded(
        "sign", [](double w) { return w < 0.0 ? -1.0 : 1.0; }, -1.0, 1.0, {0.0}));
    out.push_back(TestFunction::bounded(
        "interval(-0.5,1.5)", [](double w) { return (w > -0.5 && w <= 1.5) ? 1.0 : 0.0; }, 0.0,
        1.0, {-0.5, 1.5}));
  }
  if (out.empty()) throw ValidationError("unknown test-function family: " + family);
  return out;
}

}  // namespace steinchaos
