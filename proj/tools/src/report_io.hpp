#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "steinchaos/bound_report.hpp"

namespace steinchaos::cli {

using Json = nlohmann::ordered_json;

/// Shortest decimal that reads back to the same double.
std::string format_number(double v);

template <class T>
Json optional_json(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

Json tolerances_json(const std::vector<std::pair<std::string, double>>& tolerances);

Json bound_report_json(const BoundReport& r);

/// Rows are joined with ',' and terminated by '\n'; no quoting is needed for our fields.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);
  void row(const std::vector<std::string>& cells);
  const std::string& str() const { return text_; }

 private:
  std::size_t width_;
  std::string text_;
};

}  // namespace steinchaos::cli
