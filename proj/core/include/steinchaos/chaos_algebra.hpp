#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace steinchaos {

inline constexpr std::uint32_t kMaxBasisIndex = 63;   ///< basis indices 0..63
inline constexpr std::uint32_t kDefaultOrderCap = 16;

/// Finitely supported multiplicities alpha_j >= 1, kept sorted by basis index j.
class MultiIndex {
 public:
  using Entry = std::pair<std::uint32_t, std::uint32_t>;

  MultiIndex() = default;
  /// Entries may come in any order; zero multiplicities are dropped, repeated j is an error.
  MultiIndex(std::initializer_list<Entry> entries);
  explicit MultiIndex(std::vector<Entry> entries);

  /// m e_j.
  static MultiIndex unit(std::uint32_t j, std::uint32_t m = 1);

  const std::vector<Entry>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  std::uint32_t order() const { return order_; }
  std::uint32_t multiplicity(std::uint32_t j) const;
  /// Copy with alpha_j changed by delta (must stay >= 0).
  MultiIndex shifted(std::uint32_t j, int delta) const;
  std::string to_string() const;

  friend bool operator==(const MultiIndex& a, const MultiIndex& b) { return a.entries_ == b.entries_; }
  friend bool operator<(const MultiIndex& a, const MultiIndex& b);

 private:
  void normalize();

  std::vector<Entry> entries_;
  std::uint32_t order_ = 0;
};

/// eta_j = <eta, h_j> on a finite support.
class CoeffVector {
 public:
  CoeffVector() = default;
  CoeffVector(std::initializer_list<std::pair<const std::uint32_t, double>> values);
  explicit CoeffVector(std::map<std::uint32_t, double> values);
  /// Coordinates 0..values.size()-1.
  static CoeffVector dense(const std::vector<double>& values);

  const std::map<std::uint32_t, double>& values() const { return values_; }
  double get(std::uint32_t j) const;
  bool contains(std::uint32_t j) const { return values_.count(j) != 0; }
  void set(std::uint32_t j, double v);
  /// |eta|_p = sqrt(sum_j (2j+2)^{2p} eta_j^2); p may be negative.
  double norm_p(double p) const;

 private:
  std::map<std::uint32_t, double> values_;
};

/**
 * phi = sum_alpha c_alpha Xi_alpha with Xi_alpha = prod_j He_{alpha_j}(xi_j) / sqrt(alpha_j!),
 * an orthonormal basis of L^2 of the i.i.d. N(0, 1) coordinates xi_j.
 */
class ChaosFunctional {
 public:
  using Terms = std::map<MultiIndex, double>;

  ChaosFunctional() = default;
  explicit ChaosFunctional(Terms terms);

  static ChaosFunctional constant(double c);
  static ChaosFunctional basis(const MultiIndex& alpha, double coeff = 1.0);
  /// sum_j eta_j Xi_{e_j}.
  static ChaosFunctional first_chaos(const CoeffVector& eta);

  const Terms& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  double coeff(const MultiIndex& alpha) const;
  /// Adds c to the coefficient of alpha; exact zeros are removed.
  void add_term(const MultiIndex& alpha, double c);

  /// E[phi] = c_empty.
  double expectation() const { return coeff(MultiIndex{}); }
  /// Var phi = sum over nonempty alpha of c_alpha^2.
  double variance() const;
  std::uint32_t max_order() const;
  /// Basis indices appearing in some term, ascending.
  std::vector<std::uint32_t> active_coordinates() const;
  /// 1 + the largest basis index used (0 for a constant).
  std::uint32_t basis_dim() const;
  bool is_constant() const { return max_order() == 0; }

  ChaosFunctional scaled(double s) const;
  friend ChaosFunctional operator+(const ChaosFunctional& a, const ChaosFunctional& b);
  friend bool operator==(const ChaosFunctional& a, const ChaosFunctional& b) {
    return a.terms_ == b.terms_;
  }

 private:
  Terms terms_;
};

/// Normalized Hermite values He_k(x)/sqrt(k!) for k = 0..max_degree.
std::vector<double> normalized_hermite(double x, std::uint32_t max_degree);

/// phi at the point xi; DomainError if a coordinate phi uses is missing.
double evaluate(const ChaosFunctional& phi, const CoeffVector& xi);

/// sqrt(sum_alpha c_alpha^2 prod_j (2j+2)^{2 p alpha_j}).
double norm_2p(const ChaosFunctional& phi, double p);

/// <<phi, psi>>_{2,0} = E[phi psi] = sum_alpha c^phi_alpha c^psi_alpha.
double inner(const ChaosFunctional& phi, const ChaosFunctional& psi);

/// S phi(eta) = sum_alpha c_alpha prod_j eta_j^{alpha_j} / sqrt(alpha_j!); missing eta_j are 0.
double s_transform(const ChaosFunctional& phi, const CoeffVector& eta);

/// c_alpha -> |alpha| c_alpha.
ChaosFunctional number_op(const ChaosFunctional& phi);
/// c_alpha -> c_alpha / |alpha|; PreconditionError unless E[phi] = 0 (|c_empty| <= tol).
ChaosFunctional inv_number_op(const ChaosFunctional& phi, double tol = 0.0);

/// a_j Xi_alpha = sqrt(alpha_j) Xi_{alpha - e_j}.
ChaosFunctional annihilate(const ChaosFunctional& phi, std::uint32_t j);

/// The components a_j phi; d_t phi = sum_j h_j(t) a_j phi and d_eta phi = sum_j eta_j a_j phi.
class HidaDerivative {
 public:
  explicit HidaDerivative(std::map<std::uint32_t, ChaosFunctional> components)
      : components_(std::move(components)) {}

  const std::map<std::uint32_t, ChaosFunctional>& components() const { return components_; }
  /// a_j phi (zero if j is not active).
  ChaosFunctional component(std::uint32_t j) const;
  /// d_eta phi.
  ChaosFunctional directional(const CoeffVector& eta) const;
  /// d_t phi using Hermite functions h_j(t).
  ChaosFunctional at(double t) const;
  /// sum_j ||a_j phi||^2_{2,0}, i.e. the integral of ||d_t phi||^2 over t.
  double energy() const;

 private:
  std::map<std::uint32_t, ChaosFunctional> components_;
};

HidaDerivative hida_derivative(const ChaosFunctional& phi);

/// d_eta phi directly.
ChaosFunctional directional_derivative(const ChaosFunctional& phi, const CoeffVector& eta);

/**
 * phi * psi, linearized coordinatewise with
 * Xi_m Xi_n = sum_r r! C(m,r) C(n,r) sqrt((m+n-2r)! / (m! n!)) Xi_{m+n-2r}.
 * Term pairs are visited in sorted multi-index order and each output
 * coefficient is accumulated with compensated summation, so results are
 * bit-reproducible. CapacityError if some |alpha| + |beta| exceeds order_cap.
 */
ChaosFunctional multiply(const ChaosFunctional& phi, const ChaosFunctional& psi,
                         std::uint32_t order_cap = kDefaultOrderCap);

struct IbpResult {
  double lhs = 0.0;  ///< E[<x, h> phi]
  double rhs = 0.0;  ///< E[d_h phi]
};

IbpResult ibp_check(const ChaosFunctional& phi, const CoeffVector& h);

/// sqrt(sup_{n >= 1} n 4^{-n r}); DomainError unless r > 0.
double omega_r(double r);

/// Chaos file: {"basis_dim": J, "terms": [{"alpha": [[j, m], ...], "coeff": c}, ...]}.
ChaosFunctional parse_chaos_json(const std::string& text);
ChaosFunctional load_chaos_file(const std::string& path);
/// Shortest round-trip decimal coefficients; parse_chaos_json(to_chaos_json(phi)) == phi.
std::string to_chaos_json(const ChaosFunctional& phi, int indent = 2);

}  // namespace steinchaos
