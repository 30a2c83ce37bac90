#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace singular::cli {

/// One recognised configuration key of an experiment with its default.
/// An empty default means "unset" for optional keys.
struct KeySpec {
  std::string key;
  std::string default_value;
  std::string help;
};

using KeyValues = std::map<std::string, std::string>;

/// Parses flat `key = value` text. Blank lines and lines starting with '#'
/// are ignored; a repeated key keeps its last value.
KeyValues parse_config_text(std::string_view text, std::string_view origin = "<text>");
KeyValues parse_config_file(const std::filesystem::path& path);

/// Splits a single `key=value` override.
std::pair<std::string, std::string> parse_assignment(std::string_view text);

/// Resolved configuration of one experiment: schema defaults, overridden by
/// the file, overridden by command-line assignments. Unknown keys and
/// malformed values raise singular::ConfigError.
class Config {
 public:
  Config(std::string experiment, const std::vector<KeySpec>& schema,
         const KeyValues& file_values,
         const std::vector<std::pair<std::string, std::string>>& overrides = {});

  const std::string& experiment() const noexcept { return experiment_; }
  const KeyValues& resolved() const noexcept { return values_; }

  bool is_set(const std::string& key) const;
  const std::string& text(const std::string& key) const;
  double number(const std::string& key) const;
  int integer(const std::string& key) const;
  /// Comma/space separated numbers, `geom(lo, hi, n)` or `lin(lo, hi, n)`.
  std::vector<double> list(const std::string& key) const;

  /// 64-bit FNV-1a hash of the experiment name and the resolved values,
  /// as 16 hex digits.
  std::string hash() const;

 private:
  std::string experiment_;
  KeyValues values_;
};

/// Locale-independent number parsing; throws ConfigError naming `what`.
double parse_number(std::string_view text, std::string_view what);
std::vector<double> parse_list(std::string_view text, std::string_view what);

}  // namespace singular::cli
