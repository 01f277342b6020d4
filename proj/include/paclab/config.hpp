#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace paclab {

struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Flat "key = value" configuration, one entry per line, '#' comments.
class FlatConfig {
 public:
  FlatConfig() = default;
  static FlatConfig parse(std::istream& is);
  static FlatConfig from_file(const std::string& path);

  bool has(const std::string& key) const { return entries_.count(key) != 0; }

  std::string get_string(const std::string& key, const std::string& fallback) const;
  std::string require_string(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  double require_double(const std::string& key) const;
  long long get_int(const std::string& key, long long fallback) const;
  long long require_int(const std::string& key) const;
  std::uint64_t get_seed(const std::string& key, std::uint64_t fallback) const;
  /// Comma-separated integers.
  std::vector<long long> get_int_list(const std::string& key) const;
  std::vector<double> get_double_list(const std::string& key) const;

  const std::map<std::string, std::string>& entries() const { return entries_; }
  void set(const std::string& key, const std::string& value) { entries_[key] = value; }

 private:
  std::map<std::string, std::string> entries_;
};

}  // namespace paclab
