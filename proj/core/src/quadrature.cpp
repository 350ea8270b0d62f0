#include "steinchaos/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>
#include <string>

#include <Eigen/Eigenvalues>

#include "steinchaos/errors.hpp"
#include "steinchaos/gauss_core.hpp"

namespace steinchaos {

namespace {

// Kronrod abscissae on [0, 1); odd entries (1, 3, 5, 7) are the Gauss points.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a;
  double b;
  double value;
  double error;
  double abs_value;
  bool operator<(const Segment& other) const { return error < other.error; }
};

Segment kronrod_segment(const std::function<double(double)>& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  double abs_sum = std::abs(kronrod);
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double f1 = f(center - dx);
    const double f2 = f(center + dx);
    kronrod += kWgk[j] * (f1 + f2);
    abs_sum += kWgk[j] * (std::abs(f1) + std::abs(f2));
    if (j % 2 == 1) gauss += kWg[j / 2] * (f1 + f2);
  }
  Segment s{a, b, kronrod * half, std::abs((kronrod - gauss) * half), abs_sum * std::abs(half)};
  if (!std::isfinite(s.value)) {
    std::ostringstream msg;
    msg << "integrate_adaptive: non-finite integrand on [" << a << ", " << b << "]";
    throw AccuracyError(msg.str());
  }
  return s;
}

IntegrationResult integrate_finite(const std::function<double(double)>& f, double a, double b,
                                   double abs_tol, std::size_t max_intervals) {
  IntegrationResult result;
  if (a == b) {
    result.converged = true;
    return result;
  }
  std::priority_queue<Segment> heap;
  std::vector<Segment> finished;
  heap.push(kronrod_segment(f, a, b));
  result.evaluations = 15;
  double total_error = heap.top().error;
  const double eps = std::numeric_limits<double>::epsilon();
  for (;;) {
    while (!heap.empty() && total_error > abs_tol &&
           heap.size() + finished.size() < max_intervals) {
      Segment worst = heap.top();
      heap.pop();
      const double mid = 0.5 * (worst.a + worst.b);
      if (!(mid > worst.a && mid < worst.b) ||
          std::abs(worst.b - worst.a) <= 16.0 * eps * std::max(std::abs(worst.a), std::abs(worst.b))) {
        finished.push_back(worst);
        continue;
      }
      Segment left = kronrod_segment(f, worst.a, mid);
      Segment right = kronrod_segment(f, mid, worst.b);
      result.evaluations += 30;
      total_error += left.error + right.error - worst.error;
      heap.push(left);
      heap.push(right);
    }
    if (heap.empty() || heap.size() + finished.size() >= max_intervals) break;
    // The running total drifts by rounding; resume if the exact total is still above tolerance.
    std::vector<Segment> snapshot = finished;
    auto copy = heap;
    CompensatedSum exact;
    for (const auto& seg : snapshot) exact.add(seg.error);
    while (!copy.empty()) {
      exact.add(copy.top().error);
      copy.pop();
    }
    if (exact.value() <= abs_tol) break;
    total_error = exact.value();
  }
  std::vector<Segment> all = std::move(finished);
  while (!heap.empty()) {
    all.push_back(heap.top());
    heap.pop();
  }
  // Sum in left-to-right order so results do not depend on heap internals.
  std::sort(all.begin(), all.end(), [](const Segment& x, const Segment& y) { return x.a < y.a; });
  CompensatedSum value;
  CompensatedSum error;
  CompensatedSum abs_value;
  for (const auto& s : all) {
    value.add(s.value);
    error.add(s.error);
    abs_value.add(s.abs_value);
  }
  result.value = value.value();
  result.error_estimate = error.value();
  result.intervals = all.size();
  result.converged = result.error_estimate <= std::max(abs_tol, 64.0 * eps * abs_value.value());
  return result;
}

}  // namespace

const char* to_string(QuadratureKind kind) {
  switch (kind) {
    case QuadratureKind::gauss_hermite:
      return "gauss-hermite";
    case QuadratureKind::gauss_legendre:
      return "gauss-legendre";
    case QuadratureKind::adaptive_gauss_kronrod:
      return "adaptive-gauss-kronrod";
  }
  return "unknown";
}

QuadratureRule gauss_hermite_nodes(std::size_t m) {
  if (m < 1 || m > kMaxGaussHermiteNodes) {
    throw CapacityError("gauss_hermite_nodes: node count must lie in [1, 256], got " +
                        std::to_string(m));
  }
  // Golub-Welsch for the weight exp(-x^2) gives starting nodes; each is then
  // polished by Newton on the orthonormal recurrence, which also yields the
  // weight 2 / p'(x)^2 with full relative accuracy in the tails.
  constexpr double kPim4 = 0.751125544464942483361405155719475;  // pi^{-1/4}
  const double md = static_cast<double>(m);
  std::vector<double> x(m);
  std::vector<double> w(m);
  const std::size_t half = (m + 1) / 2;
  std::vector<double> start(m, 0.0);
  if (m > 1) {
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m));
    Eigen::VectorXd sub(static_cast<Eigen::Index>(m - 1));
    for (std::size_t j = 1; j < m; ++j) sub(static_cast<Eigen::Index>(j - 1)) = std::sqrt(0.5 * j);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;
    eig.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    // Eigenvalues ascend; x[] holds the roots in descending order.
    for (std::size_t i = 0; i < m; ++i) start[i] = eig.eigenvalues()(static_cast<Eigen::Index>(m - 1 - i));
  }
  for (std::size_t i = 0; i < half; ++i) {
    double z = start[i];
    double pp = 0.0;
    for (int it = 0; it < 8; ++it) {
      double p1 = kPim4;
      double p2 = 0.0;
      for (std::size_t j = 0; j < m; ++j) {
        const double jd = static_cast<double>(j);
        const double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / (jd + 1.0)) * p2 - std::sqrt(jd / (jd + 1.0)) * p3;
      }
      pp = std::sqrt(2.0 * md) * p2;
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) <= 1e-15 * std::max(1.0, std::abs(z))) break;
    }
    x[i] = z;
    x[m - 1 - i] = -z;
    w[i] = 2.0 / (pp * pp);
    w[m - 1 - i] = w[i];
  }
  if (m % 2 == 1) x[half - 1] = 0.0;

  QuadratureRule rule;
  rule.kind = QuadratureKind::gauss_hermite;
  rule.nodes.resize(m);
  rule.weights.resize(m);
  constexpr double kInvSqrtPi = 0.564189583547756286948079451560772586;
  for (std::size_t i = 0; i < m; ++i) {
    // NR ordering is descending in x.
    rule.nodes[m - 1 - i] = kSqrt2 * x[i];
    rule.weights[m - 1 - i] = w[i] * kInvSqrtPi;
  }
  return rule;
}

QuadratureRule gauss_legendre_nodes(std::size_t m, double a, double b) {
  if (m < 1 || m > kMaxGaussLegendreNodes) {
    throw CapacityError("gauss_legendre_nodes: node count must lie in [1, 1024], got " +
                        std::to_string(m));
  }
  if (!(std::isfinite(a) && std::isfinite(b)) || !(a < b)) {
    throw DomainError("gauss_legendre_nodes: need finite a < b");
  }
  QuadratureRule rule;
  rule.kind = QuadratureKind::gauss_legendre;
  rule.nodes.resize(m);
  rule.weights.resize(m);
  const double md = static_cast<double>(m);
  const double xm = 0.5 * (b + a);
  const double xl = 0.5 * (b - a);
  const std::size_t half = (m + 1) / 2;
  for (std::size_t i = 1; i <= half; ++i) {
    double z = std::cos(kPi * (static_cast<double>(i) - 0.25) / (md + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = 1.0;
      double p2 = 0.0;
      for (std::size_t j = 1; j <= m; ++j) {
        const double jd = static_cast<double>(j);
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * jd - 1.0) * z * p2 - (jd - 1.0) * p3) / jd;
      }
      pp = md * (z * p1 - p2) / (z * z - 1.0);
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) <= 1e-16) break;
    }
    rule.nodes[i - 1] = xm - xl * z;
    rule.nodes[m - i] = xm + xl * z;
    rule.weights[i - 1] = 2.0 * xl / ((1.0 - z * z) * pp * pp);
    rule.weights[m - i] = rule.weights[i - 1];
  }
  if (m % 2 == 1) rule.nodes[half - 1] = xm;
  return rule;
}

QuadratureRule gauss_kronrod_rule() {
  QuadratureRule rule;
  rule.kind = QuadratureKind::adaptive_gauss_kronrod;
  for (int j = 0; j < 7; ++j) {
    rule.nodes.push_back(-kXgk[j]);
    rule.weights.push_back(kWgk[j]);
  }
  rule.nodes.push_back(0.0);
  rule.weights.push_back(kWgk[7]);
  for (int j = 6; j >= 0; --j) {
    rule.nodes.push_back(kXgk[j]);
    rule.weights.push_back(kWgk[j]);
  }
  return rule;
}

IntegrationResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                     double abs_tol, std::size_t max_intervals) {
  if (std::isnan(a) || std::isnan(b)) throw DomainError("integrate_adaptive: NaN bound");
  if (a > b) {
    IntegrationResult r = integrate_adaptive(f, b, a, abs_tol, max_intervals);
    r.value = -r.value;
    return r;
  }
  const bool lo_inf = std::isinf(a);
  const bool hi_inf = std::isinf(b);
  if (lo_inf && hi_inf) {
    auto g = [&f](double u) {
      const double d = 1.0 - u * u;
      return f(u / d) * (1.0 + u * u) / (d * d);
    };
    return integrate_finite(g, -1.0, 1.0, abs_tol, max_intervals);
  }
  if (hi_inf) {
    auto g = [&f, a](double u) {
      const double d = 1.0 - u;
      return f(a + u / d) / (d * d);
    };
    return integrate_finite(g, 0.0, 1.0, abs_tol, max_intervals);
  }
  if (lo_inf) {
    auto g = [&f, b](double u) {
      const double d = 1.0 - u;
      return f(b - u / d) / (d * d);
    };
    return integrate_finite(g, 0.0, 1.0, abs_tol, max_intervals);
  }
  return integrate_finite(f, a, b, abs_tol, max_intervals);
}

double integrate(const std::function<double(double)>& f, double a, double b, double abs_tol,
                 std::size_t max_intervals) {
  IntegrationResult r = integrate_adaptive(f, a, b, abs_tol, max_intervals);
  if (!r.converged) {
    std::ostringstream msg;
    msg.precision(3);
    msg << "integrate: tolerance " << abs_tol << " not reached on [" << a << ", " << b
        << "] (error estimate " << r.error_estimate << " after " << r.intervals << " intervals)";
    throw AccuracyError(msg.str());
  }
  return r.value;
}

double integrate_piecewise(const std::function<double(double)>& f,
                           const std::vector<double>& breakpoints, double abs_tol,
                           std::size_t max_intervals) {
  if (breakpoints.size() < 2) return 0.0;
  const double pieces = static_cast<double>(breakpoints.size() - 1);
  CompensatedSum acc;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    acc.add(integrate(f, breakpoints[i], breakpoints[i + 1], abs_tol / pieces, max_intervals));
  }
  return acc.value();
}

}  // namespace steinchaos
