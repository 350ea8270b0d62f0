#include <fstream>
#include <sstream>

#include "json.hpp"
#include "steinchaos/chaos_algebra.hpp"
#include "steinchaos/errors.hpp"

namespace steinchaos {

namespace {

using nlohmann::json;

std::string syntax_error(const std::string& text, const json::parse_error& e) {
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

std::uint32_t small_uint(const json& v, const std::string& path) {
  if (!v.is_number_unsigned()) throw ValidationError(path + ": expected a nonnegative integer");
  const auto x = v.get<std::uint64_t>();
  if (x > 1000000) throw ValidationError(path + ": value out of range");
  return static_cast<std::uint32_t>(x);
}

}  // namespace

ChaosFunctional parse_chaos_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(syntax_error(text, e));
  }
  if (!doc.is_object()) throw ValidationError("chaos file: top level must be an object");
  if (!doc.contains("basis_dim")) throw ValidationError("basis_dim: missing");
  const std::uint32_t basis_dim = small_uint(doc["basis_dim"], "basis_dim");
  if (basis_dim > kMaxBasisIndex + 1) {
    throw ValidationError("basis_dim: exceeds the cap of " + std::to_string(kMaxBasisIndex + 1));
  }
  if (!doc.contains("terms") || !doc["terms"].is_array()) {
    throw ValidationError("terms: missing or not a list");
  }
  ChaosFunctional::Terms terms;
  const auto& list = doc["terms"];
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string path = "terms[" + std::to_string(i) + "]";
    const auto& item = list[i];
    if (!item.is_object()) throw ValidationError(path + ": expected an object");
    if (!item.contains("alpha") || !item["alpha"].is_array()) {
      throw ValidationError(path + ".alpha: missing or not a list");
    }
    if (!item.contains("coeff") || !item["coeff"].is_number()) {
      throw ValidationError(path + ".coeff: missing or not a number");
    }
    std::vector<MultiIndex::Entry> entries;
    const auto& alpha = item["alpha"];
    for (std::size_t k = 0; k < alpha.size(); ++k) {
      const std::string epath = path + ".alpha[" + std::to_string(k) + "]";
      const auto& pair = alpha[k];
      if (!pair.is_array() || pair.size() != 2) throw ValidationError(epath + ": expected [j, mult]");
      const std::uint32_t j = small_uint(pair[0], epath + "[0]");
      const std::uint32_t m = small_uint(pair[1], epath + "[1]");
      if (j >= basis_dim) {
        throw ValidationError(epath + "[0]: basis index " + std::to_string(j) +
                              " is not below basis_dim " + std::to_string(basis_dim));
      }
      if (m == 0) throw ValidationError(epath + "[1]: multiplicity must be at least 1");
      entries.push_back({j, m});
    }
    MultiIndex index;
    try {
      index = MultiIndex(std::move(entries));
    } catch (const Error& e) {
      throw ValidationError(path + ".alpha: " + e.what());
    }
    if (terms.count(index)) {
      throw ValidationError(path + ".alpha: multi-index " + index.to_string() + " repeated");
    }
    terms[index] = item["coeff"].get<double>();
  }
  return ChaosFunctional(std::move(terms));
}

ChaosFunctional load_chaos_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open functional file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_chaos_json(buf.str());
}

std::string to_chaos_json(const ChaosFunctional& phi, int indent) {
  json doc = json::object();
  doc["basis_dim"] = std::max<std::uint32_t>(1, phi.basis_dim());
  json terms = json::array();
  for (const auto& [alpha, c] : phi.terms()) {
    json entries = json::array();
    for (const auto& [j, m] : alpha.entries()) entries.push_back({j, m});
    json term = json::object();
    term["alpha"] = entries;
    term["coeff"] = c;
    terms.push_back(term);
  }
  doc["terms"] = terms;
  return doc.dump(indent) + "\n";
}

}  // namespace steinchaos
