#include "steinchaos/chaos_algebra.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "steinchaos/errors.hpp"
#include "steinchaos/gauss_core.hpp"
#include "steinchaos/parallel.hpp"

namespace steinchaos {

namespace {

constexpr std::size_t kFactorialTable = 171;

const std::array<double, kFactorialTable>& factorials() {
  static const std::array<double, kFactorialTable> table = [] {
    std::array<double, kFactorialTable> f{};
    f[0] = 1.0;
    for (std::size_t k = 1; k < kFactorialTable; ++k) f[k] = f[k - 1] * static_cast<double>(k);
    return f;
  }();
  return table;
}

double binomial(std::uint32_t n, std::uint32_t k) {
  const auto& f = factorials();
  return f[n] / (f[k] * f[n - k]);
}

void check_basis_index(std::uint32_t j) {
  if (j > kMaxBasisIndex) {
    throw CapacityError("basis index " + std::to_string(j) + " exceeds the cap of " +
                        std::to_string(kMaxBasisIndex));
  }
}

}  // namespace

MultiIndex::MultiIndex(std::initializer_list<Entry> entries) : entries_(entries) { normalize(); }

MultiIndex::MultiIndex(std::vector<Entry> entries) : entries_(std::move(entries)) { normalize(); }

void MultiIndex::normalize() {
  entries_.erase(std::remove_if(entries_.begin(), entries_.end(),
                                [](const Entry& e) { return e.second == 0; }),
                 entries_.end());
  std::sort(entries_.begin(), entries_.end());
  order_ = 0;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    check_basis_index(entries_[i].first);
    if (i > 0 && entries_[i].first == entries_[i - 1].first) {
      throw ValidationError("multi-index lists basis index " + std::to_string(entries_[i].first) +
                            " twice");
    }
    order_ += entries_[i].second;
  }
}

MultiIndex MultiIndex::unit(std::uint32_t j, std::uint32_t m) { return MultiIndex{{j, m}}; }

std::uint32_t MultiIndex::multiplicity(std::uint32_t j) const {
  const auto it = std::lower_bound(entries_.begin(), entries_.end(), Entry{j, 0});
  return (it != entries_.end() && it->first == j) ? it->second : 0;
}

MultiIndex MultiIndex::shifted(std::uint32_t j, int delta) const {
  std::vector<Entry> out = entries_;
  auto it = std::lower_bound(out.begin(), out.end(), Entry{j, 0});
  if (it != out.end() && it->first == j) {
    const long m = static_cast<long>(it->second) + delta;
    if (m < 0) throw DomainError("multi-index multiplicity would become negative");
    it->second = static_cast<std::uint32_t>(m);
  } else {
    if (delta < 0) throw DomainError("multi-index multiplicity would become negative");
    out.insert(it, Entry{j, static_cast<std::uint32_t>(delta)});
  }
  return MultiIndex(std::move(out));
}

std::string MultiIndex::to_string() const {
  if (entries_.empty()) return "{}";
  std::ostringstream s;
  s << '{';
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (i) s << ',';
    s << entries_[i].first << ':' << entries_[i].second;
  }
  s << '}';
  return s.str();
}

bool operator<(const MultiIndex& a, const MultiIndex& b) {
  if (a.order_ != b.order_) return a.order_ < b.order_;
  return a.entries_ < b.entries_;
}

CoeffVector::CoeffVector(std::initializer_list<std::pair<const std::uint32_t, double>> values)
    : CoeffVector(std::map<std::uint32_t, double>(values)) {}

CoeffVector::CoeffVector(std::map<std::uint32_t, double> values) : values_(std::move(values)) {
  for (const auto& [j, v] : values_) {
    check_basis_index(j);
    if (!std::isfinite(v)) throw DomainError("coefficient vector entries must be finite");
  }
}

CoeffVector CoeffVector::dense(const std::vector<double>& values) {
  std::map<std::uint32_t, double> m;
  for (std::size_t j = 0; j < values.size(); ++j) m[static_cast<std::uint32_t>(j)] = values[j];
  return CoeffVector(std::move(m));
}

double CoeffVector::get(std::uint32_t j) const {
  const auto it = values_.find(j);
  return it == values_.end() ? 0.0 : it->second;
}

void CoeffVector::set(std::uint32_t j, double v) {
  check_basis_index(j);
  if (!std::isfinite(v)) throw DomainError("coefficient vector entries must be finite");
  values_[j] = v;
}

double CoeffVector::norm_p(double p) const {
  CompensatedSum acc;
  for (const auto& [j, v] : values_) {
    acc.add(std::pow(2.0 * j + 2.0, 2.0 * p) * v * v);
  }
  return std::sqrt(acc.value());
}

ChaosFunctional::ChaosFunctional(Terms terms) : terms_(std::move(terms)) {
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (!std::isfinite(it->second)) throw DomainError("chaos coefficients must be finite");
    it = it->second == 0.0 ? terms_.erase(it) : std::next(it);
  }
}

ChaosFunctional ChaosFunctional::constant(double c) { return basis(MultiIndex{}, c); }

ChaosFunctional ChaosFunctional::basis(const MultiIndex& alpha, double coeff) {
  return ChaosFunctional(Terms{{alpha, coeff}});
}

ChaosFunctional ChaosFunctional::first_chaos(const CoeffVector& eta) {
  Terms t;
  for (const auto& [j, v] : eta.values()) t[MultiIndex::unit(j)] = v;
  return ChaosFunctional(std::move(t));
}

double ChaosFunctional::coeff(const MultiIndex& alpha) const {
  const auto it = terms_.find(alpha);
  return it == terms_.end() ? 0.0 : it->second;
}

void ChaosFunctional::add_term(const MultiIndex& alpha, double c) {
  if (!std::isfinite(c)) throw DomainError("chaos coefficients must be finite");
  const double v = coeff(alpha) + c;
  if (v == 0.0) {
    terms_.erase(alpha);
  } else {
    terms_[alpha] = v;
  }
}

double ChaosFunctional::variance() const {
  CompensatedSum acc;
  for (const auto& [alpha, c] : terms_) {
    if (!alpha.empty()) acc.add(c * c);
  }
  return acc.value();
}

std::uint32_t ChaosFunctional::max_order() const {
  std::uint32_t m = 0;
  for (const auto& [alpha, c] : terms_) m = std::max(m, alpha.order());
  return m;
}

std::vector<std::uint32_t> ChaosFunctional::active_coordinates() const {
  std::vector<std::uint32_t> out;
  for (const auto& [alpha, c] : terms_) {
    for (const auto& e : alpha.entries()) out.push_back(e.first);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::uint32_t ChaosFunctional::basis_dim() const {
  const auto active = active_coordinates();
  return active.empty() ? 0 : active.back() + 1;
}

ChaosFunctional ChaosFunctional::scaled(double s) const {
  Terms t;
  for (const auto& [alpha, c] : terms_) t[alpha] = s * c;
  return ChaosFunctional(std::move(t));
}

ChaosFunctional operator+(const ChaosFunctional& a, const ChaosFunctional& b) {
  ChaosFunctional out = a;
  for (const auto& [alpha, c] : b.terms()) out.add_term(alpha, c);
  return out;
}

std::vector<double> normalized_hermite(double x, std::uint32_t max_degree) {
  std::vector<double> v(max_degree + 1);
  v[0] = 1.0;
  if (max_degree >= 1) v[1] = x;
  for (std::uint32_t k = 1; k < max_degree; ++k) {
    v[k + 1] = (x * v[k] - std::sqrt(static_cast<double>(k)) * v[k - 1]) /
               std::sqrt(static_cast<double>(k + 1));
  }
  return v;
}

double evaluate(const ChaosFunctional& phi, const CoeffVector& xi) {
  std::map<std::uint32_t, std::uint32_t> degree;
  for (const auto& [alpha, c] : phi.terms()) {
    for (const auto& [j, m] : alpha.entries()) degree[j] = std::max(degree[j], m);
  }
  std::map<std::uint32_t, std::vector<double>> tables;
  for (const auto& [j, d] : degree) {
    if (!xi.contains(j)) {
      throw DomainError("evaluate: point has no coordinate " + std::to_string(j));
    }
    tables[j] = normalized_hermite(xi.get(j), d);
  }
  CompensatedSum acc;
  for (const auto& [alpha, c] : phi.terms()) {
    double term = c;
    for (const auto& [j, m] : alpha.entries()) term *= tables[j][m];
    acc.add(term);
  }
  return acc.value();
}

double norm_2p(const ChaosFunctional& phi, double p) {
  CompensatedSum acc;
  for (const auto& [alpha, c] : phi.terms()) {
    double w = 1.0;
    for (const auto& [j, m] : alpha.entries()) w *= std::pow(2.0 * j + 2.0, 2.0 * p * m);
    acc.add(c * c * w);
  }
  return std::sqrt(acc.value());
}

double inner(const ChaosFunctional& phi, const ChaosFunctional& psi) {
  CompensatedSum acc;
  const auto& small = phi.size() <= psi.size() ? phi : psi;
  const auto& large = phi.size() <= psi.size() ? psi : phi;
  for (const auto& [alpha, c] : small.terms()) acc.add(c * large.coeff(alpha));
  return acc.value();
}

double s_transform(const ChaosFunctional& phi, const CoeffVector& eta) {
  const auto& f = factorials();
  CompensatedSum acc;
  for (const auto& [alpha, c] : phi.terms()) {
    double term = c;
    for (const auto& [j, m] : alpha.entries()) {
      term *= std::pow(eta.get(j), static_cast<double>(m)) / std::sqrt(f[m]);
    }
    acc.add(term);
  }
  return acc.value();
}

ChaosFunctional number_op(const ChaosFunctional& phi) {
  ChaosFunctional::Terms t;
  for (const auto& [alpha, c] : phi.terms()) t[alpha] = static_cast<double>(alpha.order()) * c;
  return ChaosFunctional(std::move(t));
}

ChaosFunctional inv_number_op(const ChaosFunctional& phi, double tol) {
  if (std::abs(phi.expectation()) > tol) {
    throw PreconditionError("inverse number operator needs a centered functional (E[phi] = 0)");
  }
  ChaosFunctional::Terms t;
  for (const auto& [alpha, c] : phi.terms()) {
    if (alpha.empty()) continue;
    t[alpha] = c / static_cast<double>(alpha.order());
  }
  return ChaosFunctional(std::move(t));
}

ChaosFunctional annihilate(const ChaosFunctional& phi, std::uint32_t j) {
  ChaosFunctional::Terms t;
  for (const auto& [alpha, c] : phi.terms()) {
    const std::uint32_t m = alpha.multiplicity(j);
    if (m == 0) continue;
    t[alpha.shifted(j, -1)] = std::sqrt(static_cast<double>(m)) * c;
  }
  return ChaosFunctional(std::move(t));
}

ChaosFunctional HidaDerivative::component(std::uint32_t j) const {
  const auto it = components_.find(j);
  return it == components_.end() ? ChaosFunctional{} : it->second;
}

ChaosFunctional HidaDerivative::directional(const CoeffVector& eta) const {
  ChaosFunctional out;
  for (const auto& [j, comp] : components_) {
    const double w = eta.get(j);
    if (w != 0.0) out = out + comp.scaled(w);
  }
  return out;
}

ChaosFunctional HidaDerivative::at(double t) const {
  const HermiteBasis basis;
  ChaosFunctional out;
  for (const auto& [j, comp] : components_) out = out + comp.scaled(basis.function(j, t));
  return out;
}

double HidaDerivative::energy() const {
  CompensatedSum acc;
  for (const auto& [j, comp] : components_) acc.add(inner(comp, comp));
  return acc.value();
}

HidaDerivative hida_derivative(const ChaosFunctional& phi) {
  std::map<std::uint32_t, ChaosFunctional> comps;
  for (std::uint32_t j : phi.active_coordinates()) comps.emplace(j, annihilate(phi, j));
  return HidaDerivative(std::move(comps));
}

ChaosFunctional directional_derivative(const ChaosFunctional& phi, const CoeffVector& eta) {
  ChaosFunctional::Terms t;
  std::map<MultiIndex, CompensatedSum> acc;
  for (const auto& [alpha, c] : phi.terms()) {
    for (const auto& [j, m] : alpha.entries()) {
      const double w = eta.get(j);
      if (w == 0.0) continue;
      acc[alpha.shifted(j, -1)].add(w * std::sqrt(static_cast<double>(m)) * c);
    }
  }
  for (const auto& [alpha, s] : acc) t[alpha] = s.value();
  return ChaosFunctional(std::move(t));
}

ChaosFunctional multiply(const ChaosFunctional& phi, const ChaosFunctional& psi,
                         std::uint32_t order_cap) {
  const auto& f = factorials();
  if (order_cap + 1 > kFactorialTable) throw DomainError("multiply: order cap too large");
  std::map<MultiIndex, CompensatedSum> acc;
  using Partial = std::pair<std::vector<MultiIndex::Entry>, double>;
  for (const auto& [alpha, a] : phi.terms()) {
    for (const auto& [beta, b] : psi.terms()) {
      if (alpha.order() + beta.order() > order_cap) {
        throw CapacityError("product order " + std::to_string(alpha.order() + beta.order()) +
                            " exceeds the cap of " + std::to_string(order_cap));
      }
      // merge the two sorted entry lists coordinate by coordinate
      std::vector<std::pair<std::uint32_t, std::pair<std::uint32_t, std::uint32_t>>> coords;
      const auto& ea = alpha.entries();
      const auto& eb = beta.entries();
      std::size_t i = 0;
      std::size_t k = 0;
      while (i < ea.size() || k < eb.size()) {
        if (k == eb.size() || (i < ea.size() && ea[i].first < eb[k].first)) {
          coords.push_back({ea[i].first, {ea[i].second, 0}});
          ++i;
        } else if (i == ea.size() || eb[k].first < ea[i].first) {
          coords.push_back({eb[k].first, {0, eb[k].second}});
          ++k;
        } else {
          coords.push_back({ea[i].first, {ea[i].second, eb[k].second}});
          ++i;
          ++k;
        }
      }
      std::vector<Partial> partial{{{}, a * b}};
      for (const auto& [j, mn] : coords) {
        const auto [m, n] = mn;
        std::vector<Partial> next;
        for (std::uint32_t r = 0; r <= std::min(m, n); ++r) {
          const std::uint32_t deg = m + n - 2 * r;
          const double w = f[r] * binomial(m, r) * binomial(n, r) * std::sqrt(f[deg] / (f[m] * f[n]));
          for (const auto& [entries, c] : partial) {
            auto e = entries;
            if (deg > 0) e.push_back({j, deg});
            next.push_back({std::move(e), c * w});
          }
        }
        partial = std::move(next);
      }
      for (auto& [entries, c] : partial) acc[MultiIndex(std::move(entries))].add(c);
    }
  }
  ChaosFunctional::Terms t;
  for (const auto& [alpha, s] : acc) t[alpha] = s.value();
  return ChaosFunctional(std::move(t));
}

IbpResult ibp_check(const ChaosFunctional& phi, const CoeffVector& h) {
  IbpResult r;
  r.lhs = multiply(ChaosFunctional::first_chaos(h), phi).expectation();
  r.rhs = directional_derivative(phi, h).expectation();
  return r;
}

double omega_r(double r) {
  if (!(r > 0.0) || !std::isfinite(r)) throw DomainError("omega_r: r must be positive and finite");
  const double log4r = r * std::log(4.0);
  // n 4^{-nr} increases up to n* = 1 / (r ln 4) and decreases after it.
  const double peak = 1.0 / log4r;
  const auto value = [log4r](double n) { return n * std::exp(-n * log4r); };
  double best = value(1.0);
  if (peak > 1.0) {
    const double lo = std::floor(std::min(peak, 1e18));
    best = std::max({best, value(lo), value(lo + 1.0)});
  }
  return std::sqrt(best);
}

}  // namespace steinchaos
