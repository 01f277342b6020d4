#include "paclab/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace paclab {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

}  // namespace

FlatConfig FlatConfig::parse(std::istream& is) {
  FlatConfig config;
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos)
      throw config_error("config line " + std::to_string(line_no) +
                         ": expected 'key = value'");
    const std::string key = trim(body.substr(0, eq));
    const std::string value = trim(body.substr(eq + 1));
    if (key.empty()) throw config_error("config line " + std::to_string(line_no) +
                                        ": empty key");
    config.entries_[key] = value;
  }
  return config;
}

FlatConfig FlatConfig::from_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw config_error("cannot open config file: " + path);
  return parse(is);
}

std::string FlatConfig::get_string(const std::string& key,
                                   const std::string& fallback) const {
  const auto it = entries_.find(key);
  return it == entries_.end() ? fallback : it->second;
}

std::string FlatConfig::require_string(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) throw config_error("missing config key: " + key);
  return it->second;
}

double FlatConfig::get_double(const std::string& key, double fallback) const {
  return has(key) ? require_double(key) : fallback;
}

double FlatConfig::require_double(const std::string& key) const {
  const std::string raw = require_string(key);
  try {
    std::size_t used = 0;
    const double v = std::stod(raw, &used);
    if (used != raw.size()) throw std::invalid_argument(raw);
    return v;
  } catch (const std::exception&) {
    throw config_error("config key '" + key + "': not a number: " + raw);
  }
}

long long FlatConfig::get_int(const std::string& key, long long fallback) const {
  return has(key) ? require_int(key) : fallback;
}

long long FlatConfig::require_int(const std::string& key) const {
  const std::string raw = require_string(key);
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), v);
  if (ec != std::errc{} || ptr != raw.data() + raw.size())
    throw config_error("config key '" + key + "': not an integer: " + raw);
  return v;
}

std::uint64_t FlatConfig::get_seed(const std::string& key,
                                   std::uint64_t fallback) const {
  if (!has(key)) return fallback;
  const std::string raw = require_string(key);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), v);
  if (ec != std::errc{} || ptr != raw.data() + raw.size())
    throw config_error("config key '" + key + "': not a seed: " + raw);
  return v;
}

std::vector<long long> FlatConfig::get_int_list(const std::string& key) const {
  std::vector<long long> values;
  if (!has(key)) return values;
  std::istringstream ss(require_string(key));
  std::string item;
  while (std::getline(ss, item, ',')) {
    long long v = 0;
    const std::string t = trim(item);
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc{} || ptr != t.data() + t.size())
      throw config_error("config key '" + key + "': bad list item: " + item);
    values.push_back(v);
  }
  return values;
}

std::vector<double> FlatConfig::get_double_list(const std::string& key) const {
  std::vector<double> values;
  if (!has(key)) return values;
  std::istringstream ss(require_string(key));
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      values.push_back(std::stod(trim(item)));
    } catch (const std::exception&) {
      throw config_error("config key '" + key + "': bad list item: " + item);
    }
  }
  return values;
}

}  // namespace paclab
