#include "report_io.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace steinchaos::cli {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

Json tolerances_json(const std::vector<std::pair<std::string, double>>& tolerances) {
  Json t = Json::object();
  for (const auto& [k, v] : tolerances) t[k] = v;
  return t;
}

Json bound_report_json(const BoundReport& r) {
  Json j;
  j["metric"] = to_string(r.theta.metric);
  j["theta"] = r.theta.value;
  j["bound"] = r.bound;
  j["carre_mean"] = optional_json(r.carre_mean);
  j["e_abs_dev"] = r.e_abs_dev;
  j["mc_std_error"] = r.mc_std_error;
  j["samples"] = r.samples;
  j["seed"] = r.seed;
  j["empirical_distance"] = optional_json(r.empirical_distance);
  j["empirical_std_error"] = optional_json(r.empirical_std_error);
  j["empirical_sampling_error"] = optional_json(r.empirical_sampling_error);
  j["assertion_passed"] = optional_json(r.assertion_passed);
  j["normalization_scale"] = optional_json(r.normalization_scale);
  j["method"] = r.method;
  j["tolerances"] = tolerances_json(r.tolerances);
  return j;
}

CsvWriter::CsvWriter(std::vector<std::string> header) : width_(header.size()) { row(header); }

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != width_) throw std::logic_error("CSV row width mismatch");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) text_ += ',';
    text_ += cells[i];
  }
  text_ += '\n';
}

}  // namespace steinchaos::cli
