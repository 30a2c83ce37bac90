#include "singular_cli/table.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace singular::cli {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";  // also folds -0
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 12);
  return std::string(buf, res.ptr);
}

Table::Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

void Table::add(std::vector<Cell> row) {
  if (row.size() != columns_.size()) {
    throw std::logic_error("table row has " + std::to_string(row.size()) +
                           " cells, expected " + std::to_string(columns_.size()));
  }
  std::vector<std::string> out;
  out.reserve(row.size());
  for (auto& c : row) {
    if (auto* d = std::get_if<double>(&c)) {
      out.push_back(format_number(*d));
    } else if (auto* i = std::get_if<long long>(&c)) {
      out.push_back(std::to_string(*i));
    } else {
      out.push_back(std::move(std::get<std::string>(c)));
    }
  }
  rows_.push_back(std::move(out));
}

std::string Table::render(const std::string& config_hash) const {
  std::string s = "config_hash";
  for (const auto& c : columns_) s += "," + c;
  s += "\n";
  for (const auto& r : rows_) {
    s += config_hash;
    for (const auto& c : r) s += "," + c;
    s += "\n";
  }
  return s;
}

}  // namespace singular::cli
