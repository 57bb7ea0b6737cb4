#pragma once

// Flat "key = value" configuration text. Keys are dotted paths
// (photonic.bitrate_gbps); '#' starts a comment; later assignments win.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace astra {

class KeyValueConfig {
 public:
  /// Throws ConfigError with the offending line number.
  static KeyValueConfig parse(std::string_view text, std::string_view source = "<config>");
  /// Throws IoError when the file cannot be read, ConfigError when malformed.
  static KeyValueConfig load(const std::filesystem::path& path);

  void set(const std::string& key, const std::string& value);
  /// Applies "key=value"; throws ConfigError when there is no '='.
  void apply_override(std::string_view assignment);

  bool contains(const std::string& key) const { return values_.count(key) != 0; }
  std::optional<std::string> get(const std::string& key) const;

  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
  std::uint64_t get_uint(const std::string& key, std::uint64_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  /// Comma-separated list.
  std::vector<std::string> get_list(const std::string& key, const std::vector<std::string>& fallback) const;
  std::vector<double> get_double_list(const std::string& key, const std::vector<double>& fallback) const;
  std::vector<std::uint64_t> get_uint_list(const std::string& key, const std::vector<std::uint64_t>& fallback) const;

  /// Keys starting with `prefix` (e.g. "baseline.").
  std::vector<std::string> keys_with_prefix(std::string_view prefix) const;
  /// Keys never read through a getter; used to reject typos.
  std::vector<std::string> unused_keys() const;

  /// Directory of the loaded file, for resolving relative paths.
  const std::filesystem::path& base_dir() const { return base_dir_; }

 private:
  std::optional<std::string> lookup(const std::string& key) const;

  std::map<std::string, std::string> values_;
  mutable std::set<std::string> used_;
  std::filesystem::path base_dir_ = ".";
};

}  // namespace astra
