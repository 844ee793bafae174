// Flat key-value experiment configs.
//
// Format: one `key = value` pair per line, `#` starts a comment, blank
// lines ignored. Unknown or duplicated keys are errors. Reals accept plain
// decimals and the power-of-two shorthand `2^-12`.

#pragma once

#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace levyrbm {

inline std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

// Real literal: decimal, or (+|-)2^(+|-)k.
inline double parse_real(const std::string& raw) {
  const std::string s = trim(raw);
  if (s.empty()) throw std::invalid_argument("empty numeric value");
  std::size_t start = 0;
  double sign = 1.0;
  if (s[0] == '+' || s[0] == '-') {
    sign = (s[0] == '-') ? -1.0 : 1.0;
    start = 1;
  }
  if (s.compare(start, 2, "2^") == 0) {
    const std::string exp_str = s.substr(start + 2);
    std::size_t used = 0;
    const int exponent = std::stoi(exp_str, &used);
    if (used != exp_str.size())
      throw std::invalid_argument("bad power-of-two literal '" + s + "'");
    return sign * std::ldexp(1.0, exponent);
  }
  std::size_t used = 0;
  const double value = std::stod(s, &used);
  if (used != s.size()) throw std::invalid_argument("bad numeric value '" + s + "'");
  return sign < 0 ? -std::abs(value) : value;
}

inline long parse_int(const std::string& raw) {
  const std::string s = trim(raw);
  std::size_t used = 0;
  const long value = std::stol(s, &used);
  if (used != s.size()) throw std::invalid_argument("bad integer value '" + s + "'");
  return value;
}

inline std::vector<std::string> split_list(const std::string& raw) {
  std::vector<std::string> items;
  std::string current;
  std::stringstream ss(raw);
  while (std::getline(ss, current, ',')) {
    current = trim(current);
    if (!current.empty()) items.push_back(current);
  }
  return items;
}

inline std::vector<double> parse_real_list(const std::string& raw) {
  std::vector<double> out;
  for (const auto& item : split_list(raw)) out.push_back(parse_real(item));
  return out;
}

inline std::vector<int> parse_int_list(const std::string& raw) {
  std::vector<int> out;
  for (const auto& item : split_list(raw)) out.push_back(static_cast<int>(parse_int(item)));
  return out;
}

// Ordered key-value view of one config file, with consumption tracking so
// that unknown keys can be reported.
class KeyValueConfig {
 public:
  static KeyValueConfig parse_text(const std::string& text, const std::string& origin = "<text>") {
    KeyValueConfig cfg;
    cfg.origin_ = origin;
    std::stringstream ss(text);
    std::string line;
    int line_no = 0;
    while (std::getline(ss, line)) {
      ++line_no;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      line = trim(line);
      if (line.empty()) continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos)
        throw std::invalid_argument(origin + ":" + std::to_string(line_no) +
                                    ": expected 'key = value'");
      const std::string key = trim(line.substr(0, eq));
      const std::string value = trim(line.substr(eq + 1));
      if (key.empty()) throw std::invalid_argument(origin + ":" + std::to_string(line_no) +
                                                   ": empty key");
      if (cfg.values_.count(key))
        throw std::invalid_argument(origin + ": duplicate key '" + key + "'");
      cfg.values_[key] = value;
    }
    return cfg;
  }

  static KeyValueConfig parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_text(buffer.str(), path);
  }

  bool has(const std::string& key) const { return values_.count(key) != 0; }

  std::string get(const std::string& key, const std::string& fallback) {
    consumed_.insert(key);
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
  }

  std::string require(const std::string& key) {
    consumed_.insert(key);
    const auto it = values_.find(key);
    if (it == values_.end())
      throw std::invalid_argument(origin_ + ": missing required key '" + key + "'");
    return it->second;
  }

  double get_real(const std::string& key, double fallback) {
    return has(key) ? parse_real(get(key, "")) : (consumed_.insert(key), fallback);
  }
  long get_int(const std::string& key, long fallback) {
    return has(key) ? parse_int(get(key, "")) : (consumed_.insert(key), fallback);
  }

  // Call after reading everything; any untouched key is a config error.
  void reject_unknown_keys() const {
    for (const auto& [key, value] : values_) {
      if (!consumed_.count(key))
        throw std::invalid_argument(origin_ + ": unknown key '" + key + "'");
    }
  }

 private:
  std::map<std::string, std::string> values_;
  std::set<std::string> consumed_;
  std::string origin_;
};

}  // namespace levyrbm
