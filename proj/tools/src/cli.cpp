#include "steinchaos_cli/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "report_io.hpp"
#include "steinchaos/chaos_algebra.hpp"
#include "steinchaos/dist_metrics.hpp"
#include "steinchaos/errors.hpp"
#include "steinchaos/gauss_functional.hpp"
#include "steinchaos/hida_bound.hpp"
#include "steinchaos/indep_sums.hpp"
#include "steinchaos/stein_eq.hpp"

namespace steinchaos::cli {

namespace {

constexpr const char* kVersion = "0.1.0";

struct Common {
  unsigned threads = 0;
  std::optional<unsigned long long> seed;
  std::string output;

  std::uint64_t resolved_seed() const { return seed ? *seed : default_seed(); }
};

// What a command produced: report text plus the exit status it asks for.
struct Outcome {
  std::string text;
  int status = kExitOk;
};

using Handler = std::function<Outcome()>;

void add_common(CLI::App* app, Common& common) {
  app->add_option("--threads", common.threads, "Worker threads (0 = all cores)");
  app->add_option("--seed", common.seed, "Random seed (default $STEINCHAOS_SEED or 42)");
  app->add_option("--output,-o", common.output, "Write the report to this file");
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json header(const std::string& command) {
  Json j;
  j["command"] = command;
  j["version"] = kVersion;
  return j;
}

std::string bool_cell(bool b) { return b ? "true" : "false"; }

// Slack for "empirical <= bound": three times the larger bootstrap error.
double empirical_slack(const DistanceReport& d) {
  return 3.0 * std::max(d.std_error.value_or(0.0), d.sampling_error.value_or(0.0));
}

void put_distance(Json& j, const DistanceReport& d) {
  j["empirical_distance"] = d.estimate;
  j["empirical_std_error"] = optional_json(d.std_error);
  j["empirical_sampling_error"] = optional_json(d.sampling_error);
}

std::vector<double> read_numbers(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open input file " + path);
  std::vector<double> values;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream fields(line);
    std::string token;
    while (fields >> token) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(token, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != token.size()) {
        throw ValidationError(path + ":" + std::to_string(line_no) + ": not a number: '" + token + "'");
      }
      values.push_back(v);
    }
  }
  if (values.empty()) throw ValidationError(path + ": no values");
  return values;
}

// ---- stein-eq ---------------------------------------------------------------

struct SteinEvalArgs {
  std::string family = "all";
  std::string function;
  double lo = -5.0;
  double hi = 5.0;
  double step = 0.5;
};

Outcome stein_eval(const SteinEvalArgs& a) {
  CsvWriter csv({"function", "w", "f", "fprime", "residual"});
  const auto grid = make_grid(a.lo, a.hi, a.step);
  bool matched = false;
  for (const auto& h : builtin_test_functions(a.family)) {
    if (!a.function.empty() && h.name() != a.function) continue;
    matched = true;
    const SteinSolution sol(h);
    for (double w : grid) {
      csv.row({h.name(), format_number(w), format_number(sol.f(w)), format_number(sol.fprime(w)),
               format_number(sol.residual(w))});
    }
  }
  if (!matched) throw ValidationError("no built-in test function named '" + a.function + "'");
  return {csv.str(), kExitOk};
}

struct VerifyArgs {
  std::string family = "all";
  double lo = -10.0;
  double hi = 10.0;
  double step = 1e-3;
  double slack = 1e-9;
};

Outcome verify(const VerifyArgs& a, const Common& common) {
  CsvWriter csv({"function", "quantity", "inequality", "observed", "bound", "relation",
                 "applicable", "pass"});
  const auto grid = make_grid(a.lo, a.hi, a.step);
  bool ok = true;
  for (const auto& h : builtin_test_functions(a.family)) {
    const ConstantsReport rep = verify_constants(h, grid, common.threads, a.slack);
    ok = ok && rep.all_pass();
    for (const auto& c : rep.checks) {
      csv.row({h.name(), c.quantity, c.inequality, format_number(c.observed),
               format_number(c.bound), c.relation, bool_cell(c.applicable), bool_cell(c.pass)});
    }
  }
  return {csv.str(), ok ? kExitOk : kExitAssertion};
}

// ---- distance ---------------------------------------------------------------

struct DistanceArgs {
  std::string input;
  std::string metric = "wasserstein";
  std::size_t bootstrap = 200;
  std::string density;
  unsigned n = 0;
  double delta = 0.0;
};

Outcome distance(const DistanceArgs& a, const Common& common) {
  const Metric metric = parse_metric(a.metric);
  Json j = header("distance");
  j["metric"] = to_string(metric);
  if (metric == Metric::total_variation) {
    Density dens;
    if (a.density == "chi2") {
      dens = standardized_chi2_density(a.n);
    } else if (a.density == "normal-shift") {
      dens = shifted_normal_density(a.delta);
    } else {
      throw ValidationError("total variation needs --density chi2 (with --n) or --density normal-shift (with --delta)");
    }
    const double tol = 1e-10;
    const DistanceReport d = tv_to_normal_density(dens, tol);
    j["density"] = dens.name;
    j["estimate"] = d.estimate;
    j["method"] = d.method;
    j["tolerances"] = tolerances_json({{"abs_tol", tol}});
    return {dump(j), kExitOk};
  }
  if (a.input.empty()) throw ValidationError("--input is required for wasserstein and kolmogorov");
  SampleSet sample(read_numbers(a.input));
  sample.sort();
  const std::uint64_t seed = common.resolved_seed();
  const DistanceReport d =
      distance_to_normal(sample, metric, a.bootstrap, RandomStream(seed, 2), common.threads);
  j["n"] = sample.size();
  j["estimate"] = d.estimate;
  j["std_error"] = optional_json(d.std_error);
  j["sampling_error"] = optional_json(d.sampling_error);
  j["bootstrap_replicates"] = a.bootstrap;
  j["seed"] = seed;
  j["method"] = d.method;
  return {dump(j), kExitOk};
}

// ---- bound indep-sum --------------------------------------------------------

struct IndepArgs {
  std::string model;
  std::optional<std::size_t> rademacher;
  std::optional<std::size_t> uniform;
  std::optional<std::size_t> chi2;
  std::size_t samples = 200000;
  std::size_t bootstrap = 30;
  bool assert_mode = false;
};

IndepSumModel indep_model(const IndepArgs& a, std::string& label) {
  const int given = !a.model.empty() + !!a.rademacher + !!a.uniform + !!a.chi2;
  if (given != 1) {
    throw ValidationError("give exactly one of --model, --rademacher, --uniform, --chi2");
  }
  if (!a.model.empty()) {
    label = "file:" + a.model;
    return load_model_file(a.model);
  }
  if (a.rademacher) {
    label = "rademacher_iid(n=" + std::to_string(*a.rademacher) + ")";
    return IndepSumModel::rademacher_iid(*a.rademacher);
  }
  if (a.uniform) {
    label = "uniform_iid(n=" + std::to_string(*a.uniform) + ")";
    return IndepSumModel::uniform_iid(*a.uniform);
  }
  label = "chi2(n=" + std::to_string(*a.chi2) + ")";
  return IndepSumModel::chi2(*a.chi2);
}

Outcome indep_sum(const IndepArgs& a, const Common& common) {
  std::string label;
  const IndepSumModel model = indep_model(a, label);
  const std::uint64_t seed = common.resolved_seed();
  const double bound = wasserstein_bound_indep(model);

  double max_mass_err = 0.0;
  double max_first_abs_err = 0.0;
  double sum_var = 0.0;
  double sum_abs3 = 0.0;
  for (std::size_t i = 0; i < model.size(); ++i) {
    const DistSpec& d = model.terms()[i];
    sum_var += d.variance();
    sum_abs3 += d.abs3();
    // consecutive identical terms (from "repeat") share their kernel moments
    if (i > 0 && d.kind() == model.terms()[i - 1].kind() &&
        d.variance() == model.terms()[i - 1].variance() && d.abs3() == model.terms()[i - 1].abs3()) {
      continue;
    }
    const KernelMoments m = k_kernel_moments(d);
    max_mass_err = std::max(max_mass_err, std::abs(m.mass - d.variance()));
    max_first_abs_err = std::max(max_first_abs_err, std::abs(m.first_abs - 0.5 * d.abs3()));
  }

  Json j = header("bound indep-sum");
  j["model"] = label;
  j["terms"] = model.size();
  j["sum_var"] = sum_var;
  j["sum_abs3"] = sum_abs3;
  j["metric"] = "wasserstein";
  j["bound"] = bound;
  j["kernel_mass_max_error"] = max_mass_err;
  j["kernel_first_abs_max_error"] = max_first_abs_err;
  j["samples"] = a.samples;
  j["seed"] = seed;
  if (a.samples > 0) {
    SampleSet w = simulate_sum(model, RandomStream(seed, 0), a.samples, common.threads);
    w.sort();
    const DistanceReport d = distance_to_normal(w, Metric::wasserstein, a.bootstrap,
                                                RandomStream(seed, 2), common.threads);
    put_distance(j, d);
    const bool pass = d.estimate <= bound + empirical_slack(d);
    j["assertion_passed"] = a.assert_mode ? Json(pass) : Json(nullptr);
    j["tolerances"] = tolerances_json({{"variance_sum_tol", 1e-12},
                                       {"kernel_quadrature_tol", 1e-13},
                                       {"bootstrap_replicates", static_cast<double>(a.bootstrap)},
                                       {"empirical_slack_sigmas", 3.0}});
    return {dump(j), (a.assert_mode && !pass) ? kExitAssertion : kExitOk};
  }
  j["tolerances"] = tolerances_json({{"variance_sum_tol", 1e-12}, {"kernel_quadrature_tol", 1e-13}});
  return {dump(j), kExitOk};
}

// ---- bound gaussian-functional ----------------------------------------------

struct GaussArgs {
  std::string psi = "builtin:chi2";
  unsigned n = 1;
  std::string metric = "wasserstein";
  std::size_t samples = 200000;
  std::size_t mc_samples = 20000;
  std::size_t bootstrap = 30;
  bool assert_mode = false;
};

Outcome gaussian_functional(const GaussArgs& a, const Common& common) {
  const Metric metric = parse_metric(a.metric);
  const ThetaChoice theta = theta_for(metric);
  const std::uint64_t seed = common.resolved_seed();
  const SmoothFunctional psi = SmoothFunctional::builtin(a.psi, a.n);
  const bool is_chi2 = psi.name() != "identity";

  Json j = header("bound gaussian-functional");
  j["psi"] = psi.name();
  j["n"] = is_chi2 ? a.n : 1U;
  j["metric"] = to_string(metric);
  j["theta"] = theta.value;

  GaussBoundOptions opts;
  opts.mc_samples = a.mc_samples;
  opts.threads = common.threads;
  double bound_to_check = 0.0;
  if (is_chi2) {
    const Chi2Bounds cb = chi2_bounds(a.n);
    // T of the sum is sum_i T(X_i) = chi^2_n / n, so E|1 - T| has a closed form
    j["e_abs_dev"] = cb.e_abs_dev;
    j["bound"] = theta.value * cb.e_abs_dev;
    const double closed = metric == Metric::wasserstein ? cb.d_W
                          : metric == Metric::kolmogorov ? cb.d_K
                                                         : cb.d_TV;
    j["closed_form_bound"] = closed;
    bound_to_check = closed;
    j["var_T"] = cb.var_T;
    j["var_T_quadrature"] = static_cast<double>(a.n) * interp_T_variance(psi, opts.rules);
    double max_err = 0.0;
    for (int k = 0; k <= 20; ++k) {
      const double x = -3.0 + 0.3 * k;
      max_err = std::max(max_err, std::abs(interp_T_stable(psi, x, opts.rules) -
                                           x * x / static_cast<double>(a.n)));
    }
    j["interp_T_max_error"] = max_err;
    if (a.n == 1) {
      const BoundReport r = bound_theta_E1mT(psi, theta, RandomStream(seed, 3), opts);
      j["e_abs_dev_quadrature"] = r.e_abs_dev;
      j["mc_e_abs_dev"] = optional_json(r.mc_e_abs_dev);
      j["mc_std_error"] = r.mc_std_error;
    } else {
      j["e_abs_dev_quadrature"] = nullptr;
      j["mc_e_abs_dev"] = nullptr;
      j["mc_std_error"] = nullptr;
    }
  } else {
    const BoundReport r = bound_theta_E1mT(psi, theta, RandomStream(seed, 3), opts);
    j["e_abs_dev"] = r.e_abs_dev;
    j["bound"] = r.bound;
    bound_to_check = r.bound;
    j["mc_e_abs_dev"] = optional_json(r.mc_e_abs_dev);
    j["mc_std_error"] = r.mc_std_error;
  }

  bool pass = true;
  if (metric == Metric::total_variation) {
    if (is_chi2 && a.n >= 2) {
      const DistanceReport d = tv_to_normal_density(standardized_chi2_density(a.n));
      j["empirical_distance"] = d.estimate;
      j["empirical_method"] = d.method;
      pass = d.estimate <= bound_to_check;
    } else if (!is_chi2) {
      j["empirical_distance"] = 0.0;
      j["empirical_method"] = "exact: W is standard normal";
    } else {
      j["empirical_distance"] = nullptr;
      j["empirical_method"] = "unavailable: the chi^2_1 density is unbounded";
    }
  } else if (a.samples > 0) {
    SampleSet w = is_chi2 ? simulate_sum(IndepSumModel::chi2(a.n), RandomStream(seed, 0), a.samples,
                                         common.threads)
                          : SampleSet(sample_std_normal(RandomStream(seed, 0), a.samples));
    w.sort();
    const DistanceReport d =
        distance_to_normal(w, metric, a.bootstrap, RandomStream(seed, 2), common.threads);
    put_distance(j, d);
    pass = d.estimate <= bound_to_check + empirical_slack(d);
  }
  j["samples"] = a.samples;
  j["seed"] = seed;
  j["assertion_passed"] = a.assert_mode ? Json(pass) : Json(nullptr);
  j["method"] = "T by Gauss-Legendre x Gauss-Hermite with node doubling";
  j["tolerances"] = tolerances_json({{"interp_stability_tol", opts.rules.stability_tol},
                                     {"t_nodes", static_cast<double>(opts.rules.t_nodes)},
                                     {"z_nodes", static_cast<double>(opts.rules.z_nodes)},
                                     {"outer_abs_tol", opts.outer_tol},
                                     {"mc_samples", static_cast<double>(opts.mc_samples)},
                                     {"bootstrap_replicates", static_cast<double>(a.bootstrap)}});
  return {dump(j), (a.assert_mode && !pass) ? kExitAssertion : kExitOk};
}

// ---- bound chaos / chaos check ----------------------------------------------

struct ChaosArgs {
  std::string functional;
  std::string metric = "wasserstein";
  std::size_t samples = 200000;
  std::size_t bootstrap = 30;
  std::size_t quadrature_max_coords = 2;
  bool normalize = false;
  bool assert_mode = false;
};

Outcome bound_chaos(const ChaosArgs& a, const Common& common) {
  const ChaosFunctional phi = load_chaos_file(a.functional);
  const ThetaChoice theta = theta_for(parse_metric(a.metric));
  const std::uint64_t seed = common.resolved_seed();
  ChaosBoundOptions opts;
  opts.normalize = a.normalize;
  opts.quadrature_max_coords = a.quadrature_max_coords;
  opts.threads = common.threads;
  opts.bootstrap_replicates = a.bootstrap;
  opts.assert_mode = a.assert_mode;
  const RandomStream stream(seed, 0);
  BoundReport r = theta.metric == Metric::total_variation
                      ? chaos_normal_bound(phi, theta, stream, a.samples, opts)
                      : bound_vs_empirical(phi, theta, stream, a.samples, opts);
  Json j = header("bound chaos");
  j["functional"] = a.functional;
  const Json body = bound_report_json(r);
  for (const auto& [k, v] : body.items()) j[k] = v;
  const bool failed = r.assertion_passed && !*r.assertion_passed;
  return {dump(j), failed ? kExitAssertion : kExitOk};
}

struct ChaosCheckArgs {
  std::string functional;
  double tol = 1e-12;
};

Outcome chaos_check(const ChaosCheckArgs& a) {
  const ChaosFunctional phi = load_chaos_file(a.functional);
  Json checks = Json::array();
  bool ok = true;
  const auto add = [&](const std::string& name, double lhs, double rhs) {
    const double resid = std::abs(lhs - rhs);
    const bool pass = resid <= a.tol * std::max(1.0, std::abs(rhs));
    ok = ok && pass;
    Json c;
    c["identity"] = name;
    c["lhs"] = lhs;
    c["rhs"] = rhs;
    c["residual"] = resid;
    c["pass"] = pass;
    checks.push_back(c);
  };

  CompensatedSum sq;
  CompensatedSum weighted;
  for (const auto& [alpha, c] : phi.terms()) {
    sq.add(c * c);
    weighted.add(alpha.order() * c * c);
  }
  add("parseval", norm_2p(phi, 0.0) * norm_2p(phi, 0.0), sq.value());
  const ChaosFunctional n_phi = number_op(phi);
  double eigen = 0.0;
  for (const auto& [alpha, c] : phi.terms()) {
    eigen = std::max(eigen, std::abs(n_phi.coeff(alpha) - alpha.order() * c));
  }
  add("number_operator_eigenrelation", eigen, 0.0);
  const HidaDerivative d = hida_derivative(phi);
  add("derivative_energy", d.energy(), weighted.value());
  CompensatedSum bilinear;
  for (const auto& [jj, comp] : d.components()) bilinear.add(inner(comp, comp));
  add("number_operator_bilinear", inner(n_phi, phi), bilinear.value());
  CoeffVector ones;
  for (std::uint32_t jj : phi.active_coordinates()) ones.set(jj, 1.0);
  const IbpResult ibp = ibp_check(phi, ones);
  add("integration_by_parts", ibp.lhs, ibp.rhs);
  add("json_round_trip", parse_chaos_json(to_chaos_json(phi)) == phi ? 1.0 : 0.0, 1.0);
  if (phi.expectation() == 0.0 && 2 * phi.max_order() <= kDefaultOrderCap + 2) {
    add("carre_mean", carre_functional(phi).expectation(), sq.value());
  }

  Json j = header("chaos check");
  j["functional"] = a.functional;
  j["terms"] = phi.size();
  j["max_order"] = phi.max_order();
  j["basis_dim"] = phi.basis_dim();
  j["expectation"] = phi.expectation();
  j["variance"] = phi.variance();
  j["checks"] = checks;
  j["all_pass"] = ok;
  j["tolerances"] = tolerances_json({{"relative_tol", a.tol}});
  return {dump(j), ok ? kExitOk : kExitAssertion};
}

// ---- emit-curve -------------------------------------------------------------

struct CurveArgs {
  std::string family = "chi2_bounds";
  std::vector<unsigned> n_values{10, 40, 160};
  std::size_t samples = 100000;
  std::size_t bootstrap = 30;
};

Outcome emit_curve(const CurveArgs& a, const Common& common) {
  if (a.n_values.empty()) throw ValidationError("--n needs at least one value");
  const bool chi2 = a.family == "chi2_bounds";
  if (!chi2 && a.family != "indep_sum_bounds") {
    throw ValidationError("unknown curve family '" + a.family + "' (chi2_bounds or indep_sum_bounds)");
  }
  const std::uint64_t seed = common.resolved_seed();
  CsvWriter csv({"n", "d_W_bound", "d_K_bound", "d_TV_bound", "empirical_d_W", "empirical_d_K",
                 "mc_std_error"});
  for (unsigned n : a.n_values) {
    if (n == 0) throw ValidationError("--n values must be positive");
    std::string dw, dk, dtv;
    IndepSumModel model = chi2 ? IndepSumModel::chi2(n) : IndepSumModel::rademacher_iid(n);
    if (chi2) {
      const Chi2Bounds b = chi2_bounds(n);
      dw = format_number(b.d_W);
      dk = format_number(b.d_K);
      dtv = format_number(b.d_TV);
    } else {
      dw = format_number(wasserstein_bound_indep(model));
    }
    std::string ew, ek, se;
    if (a.samples > 0) {
      SampleSet w = simulate_sum(model, RandomStream(seed, n), a.samples, common.threads);
      w.sort();
      const RandomStream boot(seed, std::uint64_t{1} << 32 | n);
      const DistanceReport w_rep =
          distance_to_normal(w, Metric::wasserstein, a.bootstrap, boot, common.threads);
      ew = format_number(w_rep.estimate);
      ek = format_number(kolmogorov_to_normal(w).estimate);
      se = w_rep.std_error ? format_number(*w_rep.std_error) : "";
    }
    csv.row({std::to_string(n), dw, dk, dtv, ew, ek, se});
  }
  return {csv.str(), kExitOk};
}

}  // namespace

unsigned long long default_seed() {
  if (const char* env = std::getenv("STEINCHAOS_SEED")) {
    try {
      std::size_t used = 0;
      const unsigned long long v = std::stoull(env, &used, 0);
      if (used == std::string(env).size()) return v;
    } catch (const std::exception&) {
    }
    throw ValidationError(std::string("STEINCHAOS_SEED is not an unsigned integer: ") + env);
  }
  return 42;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Stein's method bounds and Wiener chaos calculus", "steinchaos"};
  app.require_subcommand(1);
  Common common;
  add_common(&app, common);
  Handler handler;

  // stein-eq
  auto* stein = app.add_subcommand("stein-eq", "Solve the Stein equation for built-in test functions");
  stein->require_subcommand(1);
  SteinEvalArgs eval_args;
  auto* eval = stein->add_subcommand("eval", "CSV of f, f' and the equation residual on a grid");
  eval->add_option("--family", eval_args.family, "indicator, smoothed, lipschitz, bounded or all");
  eval->add_option("--function", eval_args.function, "Only the built-in function with this name");
  eval->add_option("--from", eval_args.lo, "Grid start");
  eval->add_option("--to", eval_args.hi, "Grid end");
  eval->add_option("--step", eval_args.step, "Grid spacing");
  add_common(eval, common);
  eval->callback([&] { handler = [&] { return stein_eval(eval_args); }; });

  VerifyArgs verify_args;
  const auto add_verify = [&](CLI::App* parent) {
    auto* v = parent->add_subcommand("verify-constants", "Certify the solution bounds on a grid (CSV)");
    v->add_option("--family", verify_args.family, "indicator, smoothed, lipschitz, bounded or all");
    v->add_option("--from", verify_args.lo, "Grid start (<= -10)");
    v->add_option("--to", verify_args.hi, "Grid end (>= 10)");
    v->add_option("--step", verify_args.step, "Grid spacing (<= 1e-3)");
    v->add_option("--slack", verify_args.slack, "Additive slack on every bound");
    add_common(v, common);
    v->callback([&] { handler = [&] { return verify(verify_args, common); }; });
  };
  add_verify(stein);
  add_verify(&app);

  // distance
  DistanceArgs dist_args;
  auto* dist = app.add_subcommand("distance", "Distance from a sample (or density) to N(0,1)");
  dist->add_option("--input", dist_args.input, "Whitespace/comma separated sample file");
  dist->add_option("--metric", dist_args.metric, "wasserstein, kolmogorov or total_variation");
  dist->add_option("--bootstrap", dist_args.bootstrap, "Bootstrap replicates (0 = none)");
  dist->add_option("--density", dist_args.density, "For total_variation: chi2 or normal-shift");
  dist->add_option("--n", dist_args.n, "Degrees of freedom of the standardized chi^2 density");
  dist->add_option("--delta", dist_args.delta, "Mean of the shifted normal density");
  add_common(dist, common);
  dist->callback([&] { handler = [&] { return distance(dist_args, common); }; });

  // bound
  auto* bound = app.add_subcommand("bound", "Normal approximation bounds");
  bound->require_subcommand(1);
  IndepArgs indep_args;
  auto* indep = bound->add_subcommand("indep-sum", "3 sum E|X_i|^3 against the simulated d_W");
  indep->add_option("--model", indep_args.model, "JSON model file");
  indep->add_option("--rademacher", indep_args.rademacher, "n i.i.d. Rademacher(1/sqrt(n)) terms");
  indep->add_option("--uniform", indep_args.uniform, "n i.i.d. uniform terms of variance 1/n");
  indep->add_option("--chi2", indep_args.chi2, "standardized chi^2_n as n terms");
  indep->add_option("--samples", indep_args.samples, "Monte Carlo draws of W (0 = bound only)");
  indep->add_option("--bootstrap", indep_args.bootstrap, "Bootstrap replicates");
  indep->add_flag("--assert", indep_args.assert_mode, "Exit 2 if the empirical distance exceeds the bound");
  add_common(indep, common);
  indep->callback([&] { handler = [&] { return indep_sum(indep_args, common); }; });

  GaussArgs gauss_args;
  auto* gauss = bound->add_subcommand("gaussian-functional", "theta E|1 - T| for W = psi(Z)");
  gauss->add_option("--psi", gauss_args.psi, "builtin:chi2 or builtin:identity");
  gauss->add_option("--n", gauss_args.n, "Degrees of freedom for builtin:chi2");
  gauss->add_option("--metric", gauss_args.metric, "wasserstein, kolmogorov or total_variation");
  gauss->add_option("--samples", gauss_args.samples, "Monte Carlo draws of W for the empirical distance");
  gauss->add_option("--mc-samples", gauss_args.mc_samples, "Monte Carlo draws for the E|1 - T| cross-check");
  gauss->add_option("--bootstrap", gauss_args.bootstrap, "Bootstrap replicates");
  gauss->add_flag("--assert", gauss_args.assert_mode, "Exit 2 if the empirical distance exceeds the bound");
  add_common(gauss, common);
  gauss->callback([&] { handler = [&] { return gaussian_functional(gauss_args, common); }; });

  ChaosArgs chaos_args;
  auto* chaos_bound = bound->add_subcommand("chaos", "theta E|1 - Gamma| for a chaos functional");
  chaos_bound->add_option("--functional", chaos_args.functional, "Chaos JSON file")->required();
  chaos_bound->add_option("--metric", chaos_args.metric, "wasserstein, kolmogorov or total_variation");
  chaos_bound->add_option("--samples", chaos_args.samples, "Monte Carlo draws");
  chaos_bound->add_option("--bootstrap", chaos_args.bootstrap, "Bootstrap replicates");
  chaos_bound->add_option("--quadrature-max-coords", chaos_args.quadrature_max_coords,
                          "Use quadrature when Gamma has at most this many coordinates (<= 2)");
  chaos_bound->add_flag("--normalize", chaos_args.normalize, "Rescale phi to unit variance");
  chaos_bound->add_flag("--assert", chaos_args.assert_mode, "Exit 2 if the empirical distance exceeds the bound");
  add_common(chaos_bound, common);
  chaos_bound->callback([&] { handler = [&] { return bound_chaos(chaos_args, common); }; });

  // chaos
  auto* chaos = app.add_subcommand("chaos", "Chaos-algebra utilities");
  chaos->require_subcommand(1);
  ChaosCheckArgs check_args;
  auto* check = chaos->add_subcommand("check", "Run the exact chaos identities on a functional");
  check->add_option("--functional", check_args.functional, "Chaos JSON file")->required();
  check->add_option("--tol", check_args.tol, "Relative tolerance");
  add_common(check, common);
  check->callback([&] { handler = [&] { return chaos_check(check_args); }; });

  // emit-curve
  CurveArgs curve_args;
  auto* curve = app.add_subcommand("emit-curve", "Bounds and empirical distances versus n (CSV)");
  curve->add_option("--family", curve_args.family, "chi2_bounds or indep_sum_bounds");
  curve->add_option("--n", curve_args.n_values, "Comma separated n values")->delimiter(',');
  curve->add_option("--samples", curve_args.samples, "Monte Carlo draws per n (0 = bounds only)");
  curve->add_option("--bootstrap", curve_args.bootstrap, "Bootstrap replicates");
  add_common(curve, common);
  curve->callback([&] { handler = [&] { return emit_curve(curve_args, common); }; });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitInputError;
  }
  if (!handler) {
    err << app.help();
    return kExitInputError;
  }

  Outcome result;
  try {
    result = handler();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  if (common.output.empty()) {
    out << result.text;
  } else {
    std::ofstream file(common.output, std::ios::binary);
    file << result.text;
    if (!file) {
      err << "error: cannot write " << common.output << "\n";
      return kExitInputError;
    }
  }
  if (result.status == kExitAssertion) err << "assertion failed: a bound was violated\n";
  return result.status;
}

}  // namespace steinchaos::cli
