#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace steinchaos {

enum class TestFunctionKind { bounded, lipschitz, indicator, smoothed_indicator };

const char* to_string(TestFunctionKind kind);

/**
 * A test function h for the Stein equation together with the regularity data
 * that decides which solution bounds apply: value bounds (inf/sup of h), a
 * Lipschitz constant with an evaluable derivative, and the locations of kinks
 * or jumps so quadrature can split there.
 */
class TestFunction {
 public:
  using Fn = std::function<double(double)>;

  /// h(w) = 1 for w <= x, 0 for w > x.
  static TestFunction indicator(double x);

  /// 1 for w <= x, 0 for w >= x + eps, linear in between.
  static TestFunction smoothed_indicator(double x, double eps);

  /// Absolutely continuous h with |h'| <= lip_const. If smooth is true the
  /// normal expectation is taken by Gauss-Hermite, otherwise adaptively.
  static TestFunction lipschitz(std::string name, Fn h, Fn dh, double lip_const,
                                std::vector<double> kinks = {}, bool smooth = false);

  /// Bounded h with inf_value <= h <= sup_value.
  static TestFunction bounded(std::string name, Fn h, double inf_value, double sup_value,
                              std::vector<double> kinks = {}, bool smooth = false);

  TestFunctionKind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  double operator()(double w) const { return h_(w); }
  bool has_derivative() const { return static_cast<bool>(dh_); }
  double derivative(double w) const;

  std::optional<double> lip_const() const { return lip_; }
  std::optional<double> inf_value() const { return inf_; }
  std::optional<double> sup_value() const { return sup_; }
  const std::vector<double>& kinks() const { return kinks_; }
  bool smooth() const { return smooth_; }

  /// Threshold x of the (smoothed) indicator kinds.
  double threshold() const { return x_; }
  double epsilon() const { return eps_; }

  /// E h(Z) for Z ~ N(0, 1).
  double normal_expectation() const;

 private:
  TestFunction() = default;

  TestFunctionKind kind_ = TestFunctionKind::bounded;
  std::string name_;
  Fn h_;
  Fn dh_;
  std::optional<double> lip_;
  std::optional<double> inf_;
  std::optional<double> sup_;
  std::vector<double> kinks_;
  bool smooth_ = false;
  double x_ = 0.0;
  double eps_ = 0.0;
};

/**
 * The bounded solution f_h of f'(w) - w f(w) = h(w) - E h(Z).
 *
 * f is evaluated from the lower-tail integral for w <= 0 and the upper-tail
 * integral for w > 0, written after the shift t = w -/+ s so the integrand
 * carries exp(+/- w s - s^2/2) and never exp(w^2/2). Indicators use the closed
 * form sqrt(2 pi) e^{w^2/2} Phi(min(w,x)) (1 - Phi(max(w,x))) expressed
 * through Mills ratios. f' is w f + h - E h(Z).
 */
class SteinSolution {
 public:
  explicit SteinSolution(TestFunction h, double quad_tol = 1e-13);

  const TestFunction& h() const { return h_; }
  double eh_z() const { return eh_z_; }

  double f(double w) const;
  double fprime(double w) const;
  /// f'' = f + w f' + h'; needs h.has_derivative().
  double fsecond(double w) const;

  /// f' - w f - (h - E h(Z)).
  double residual(double w) const;

  /// The integral representation even where a closed form exists.
  double f_by_quadrature(double w) const;

 private:
  TestFunction h_;
  double eh_z_;
  double quad_tol_;
};

SteinSolution solve_stein(const TestFunction& h);

struct ConstantCheck {
  std::string quantity;
  std::string inequality;
  double observed = 0.0;
  double bound = 0.0;
  /// "<=" (observed <= bound + slack) or "<" (observed < bound).
  std::string relation = "<=";
  bool applicable = true;
  bool pass = true;
};

struct ConstantsReport {
  std::string function_name;
  std::vector<ConstantCheck> checks;
  double slack = 1e-9;
  bool all_pass() const;
};

/// Evenly spaced grid lo, lo + step, ..., hi.
std::vector<double> make_grid(double lo, double hi, double step);

/**
 * Sup-norm certification of the solution bounds on a grid that covers at
 * least [-10, 10] with spacing <= 1e-3. Every inequality whose hypotheses h
 * meets is reported; the others are listed with applicable = false.
 */
ConstantsReport verify_constants(const TestFunction& h, const std::vector<double>& grid,
                                 unsigned threads = 0, double slack = 1e-9);

/// The built-in test functions used by the CLI ("indicator", "smoothed",
/// "lipschitz", "bounded", or "all").
std::vector<TestFunction> builtin_test_functions(const std::string& family);

}  // namespace steinchaos
