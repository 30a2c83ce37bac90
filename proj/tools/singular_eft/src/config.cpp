#include "singular_cli/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>

#include "singular/errors.hpp"

namespace singular::cli {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool valid_key(std::string_view key) {
  if (key.empty()) return false;
  for (char c : key) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-')) return false;
  }
  return true;
}

}  // namespace

std::pair<std::string, std::string> parse_assignment(std::string_view text) {
  const auto eq = text.find('=');
  if (eq == std::string_view::npos) {
    throw ConfigError("expected key=value, got '" + std::string(text) + "'");
  }
  const auto key = trim(text.substr(0, eq));
  if (!valid_key(key)) throw ConfigError("invalid key '" + std::string(key) + "'");
  return {std::string(key), std::string(trim(text.substr(eq + 1)))};
}

KeyValues parse_config_text(std::string_view text, std::string_view origin) {
  KeyValues out;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    auto line = trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    try {
      auto [k, v] = parse_assignment(line);
      out[k] = v;
    } catch (const ConfigError& e) {
      throw ConfigError(std::string(origin) + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

KeyValues parse_config_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path.string());
}

double parse_number(std::string_view text, std::string_view what) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, v);
  if (text.empty() || res.ec != std::errc{} || res.ptr != end || !std::isfinite(v)) {
    throw ConfigError(std::string(what) + ": '" + std::string(text) + "' is not a finite number");
  }
  return v;
}

std::vector<double> parse_list(std::string_view text, std::string_view what) {
  text = trim(text);
  const bool geom = text.starts_with("geom(");
  const bool lin = text.starts_with("lin(");
  if (geom || lin) {
    if (!text.ends_with(")")) throw ConfigError(std::string(what) + ": unterminated range");
    const auto inner = text.substr(geom ? 5 : 4, text.size() - (geom ? 6 : 5));
    const auto args = parse_list(inner, what);
    if (args.size() != 3) {
      throw ConfigError(std::string(what) + ": ranges take (lo, hi, count)");
    }
    const double lo = args[0], hi = args[1];
    const double n = args[2];
    if (n < 1 || n != std::floor(n) || n > 1e6) {
      throw ConfigError(std::string(what) + ": range count must be a positive integer");
    }
    if (geom && !(lo > 0.0 && hi > 0.0)) {
      throw ConfigError(std::string(what) + ": geometric ranges need positive ends");
    }
    std::vector<double> out;
    const int count = int(n);
    for (int i = 0; i < count; ++i) {
      const double t = count == 1 ? 0.0 : double(i) / (count - 1);
      out.push_back(geom ? lo * std::pow(hi / lo, t) : lo + (hi - lo) * t);
    }
    return out;
  }
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto next = text.find_first_of(", \t", pos);
    const auto item = text.substr(pos, next == std::string_view::npos ? text.npos : next - pos);
    if (!trim(item).empty()) out.push_back(parse_number(item, what));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return out;
}

Config::Config(std::string experiment, const std::vector<KeySpec>& schema,
               const KeyValues& file_values,
               const std::vector<std::pair<std::string, std::string>>& overrides)
    : experiment_(std::move(experiment)) {
  for (const auto& s : schema) values_[s.key] = s.default_value;
  auto apply = [&](const std::string& key, const std::string& value, const char* source) {
    if (key == "experiment") {
      if (value != experiment_) {
        throw ConfigError(std::string(source) + " names experiment '" + value +
                          "' but '" + experiment_ + "' was requested");
      }
      return;
    }
    auto it = values_.find(key);
    if (it == values_.end()) {
      throw ConfigError(std::string(source) + ": unknown key '" + key +
                        "' for experiment " + experiment_);
    }
    it->second = value;
  };
  for (const auto& [k, v] : file_values) apply(k, v, "config file");
  for (const auto& [k, v] : overrides) apply(k, v, "--set");
}

bool Config::is_set(const std::string& key) const { return !text(key).empty(); }

const std::string& Config::text(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("internal: key '" + key + "' not in schema");
  return it->second;
}

double Config::number(const std::string& key) const { return parse_number(text(key), key); }

int Config::integer(const std::string& key) const {
  const double v = number(key);
  if (v != std::floor(v) || std::abs(v) > 1e9) {
    throw ConfigError(key + ": '" + text(key) + "' is not an integer");
  }
  return int(v);
}

std::vector<double> Config::list(const std::string& key) const {
  return parse_list(text(key), key);
}

std::string Config::hash() const {
  std::uint64_t h = 14695981039346656037ull;
  auto feed = [&](std::string_view s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ull;
    }
  };
  feed(experiment_);
  feed("\n");
  for (const auto& [k, v] : values_) {
    feed(k);
    feed("=");
    feed(v);
    feed("\n");
  }
  static constexpr char digits[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[std::size_t(i)] = digits[h & 0xf];
    h >>= 4;
  }
  return out;
}

}  // namespace singular::cli
