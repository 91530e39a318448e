#pragma once

#include <cstdint>
#include <initializer_list>
#include <istream>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace strongcat::cli {

/// Flat "key = value" configuration. Lines starting with '#' and blank lines are ignored.
/// Later sources override earlier ones key by key.
class Config {
 public:
  struct Entry {
    std::string value;
    std::string origin;  // file path or "command line"
    int line = 0;        // 0 when not from a file
  };

  /// Throws ConfigError naming origin:line for malformed lines and duplicate keys.
  static Config parse(std::istream& is, const std::string& origin);

  void set(const std::string& key, const std::string& value, const std::string& origin, int line = 0);
  const Entry* find(const std::string& key) const;
  const std::map<std::string, Entry>& entries() const { return entries_; }

 private:
  std::map<std::string, Entry> entries_;
};

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

/// Typed, validated access to a Config. Every read records the resolved value (default
/// included) so the run can be echoed and replayed exactly.
class ConfigReader {
 public:
  explicit ConfigReader(const Config& cfg) : cfg_(cfg) {}

  bool has(const std::string& key) const { return cfg_.find(key) != nullptr; }

  double real(const std::string& key, double fallback);
  /// Rejects values outside [lo, hi].
  double real(const std::string& key, double fallback, double lo, double hi);
  /// Rejects values <= 0.
  double positive(const std::string& key, double fallback);
  int integer(const std::string& key, int fallback, int lo, int hi);
  std::uint64_t unsigned64(const std::string& key, std::uint64_t fallback);
  std::string text(const std::string& key, const std::string& fallback);
  std::string choice(const std::string& key, const std::string& fallback,
                     std::initializer_list<std::string_view> options);
  /// Comma-separated integers, each in [lo, hi].
  std::vector<int> integers(const std::string& key, const std::vector<int>& fallback, int lo, int hi);

  /// Throws ConfigError for a present key that was never read.
  void finish(const std::string& context) const;

  /// Resolved values, one "key = value" line each, sorted by key.
  std::string echo() const;
  const std::map<std::string, std::string>& resolved() const { return resolved_; }

  /// Throws ConfigError with the key's location.
  [[noreturn]] void fail(const std::string& key, const std::string& message) const;

 private:
  const Config::Entry* lookup(const std::string& key);

  const Config& cfg_;
  std::set<std::string> read_;
  std::map<std::string, std::string> resolved_;
};

}  // namespace strongcat::cli
