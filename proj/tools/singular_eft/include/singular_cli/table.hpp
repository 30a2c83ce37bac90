#pragma once

#include <string>
#include <variant>
#include <vector>

namespace singular::cli {

/// 12 significant digits, '.' decimal separator, independent of the locale.
/// Non-finite values print as nan, inf and -inf.
std::string format_number(double v);

using Cell = std::variant<double, long long, std::string>;

/// Column-oriented CSV table. Every rendered row is prefixed with the
/// configuration hash so that rows stay self-describing.
class Table {
 public:
  explicit Table(std::vector<std::string> columns);

  void add(std::vector<Cell> row);
  const std::vector<std::string>& columns() const noexcept { return columns_; }
  std::size_t size() const noexcept { return rows_.size(); }
  const std::vector<std::string>& row(std::size_t i) const { return rows_[i]; }

  std::string render(const std::string& config_hash) const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace singular::cli
