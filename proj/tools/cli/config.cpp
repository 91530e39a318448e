#include "cli/config.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <sstream>

#include "strongcat/errors.hpp"

namespace strongcat::cli {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

bool valid_key(const std::string& key) {
  if (key.empty()) return false;
  for (char c : key) {
    if (!((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_')) return false;
  }
  return true;
}

std::string where(const Config::Entry& e) {
  return e.line > 0 ? e.origin + ":" + std::to_string(e.line) : e.origin;
}

}  // namespace

Config Config::parse(std::istream& is, const std::string& origin) {
  Config cfg;
  std::string raw;
  int line = 0;
  while (std::getline(is, raw)) {
    ++line;
    const std::string s = trim(raw);
    if (s.empty() || s.front() == '#') continue;
    const auto eq = s.find('=');
    const std::string loc = origin + ":" + std::to_string(line);
    if (eq == std::string::npos) throw ConfigError(loc + ": expected 'key = value', got '" + s + "'");
    const std::string key = trim(std::string_view(s).substr(0, eq));
    const std::string value = trim(std::string_view(s).substr(eq + 1));
    if (!valid_key(key)) throw ConfigError(loc + ": invalid field name '" + key + "'");
    if (value.empty()) throw ConfigError(loc + ": field '" + key + "' has no value");
    if (const Entry* prev = cfg.find(key)) {
      throw ConfigError(loc + ": field '" + key + "' already set at line " + std::to_string(prev->line));
    }
    cfg.set(key, value, origin, line);
  }
  return cfg;
}

void Config::set(const std::string& key, const std::string& value, const std::string& origin, int line) {
  entries_[key] = Entry{value, origin, line};
}

const Config::Entry* Config::find(const std::string& key) const {
  const auto it = entries_.find(key);
  return it == entries_.end() ? nullptr : &it->second;
}

std::string format_double(double v) {
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

const Config::Entry* ConfigReader::lookup(const std::string& key) {
  read_.insert(key);
  return cfg_.find(key);
}

void ConfigReader::fail(const std::string& key, const std::string& message) const {
  const Config::Entry* e = cfg_.find(key);
  const std::string loc = e ? where(*e) + ": " : std::string();
  throw ConfigError(loc + "field '" + key + "': " + message);
}

double ConfigReader::real(const std::string& key, double fallback) {
  double v = fallback;
  if (const auto* e = lookup(key)) {
    const char* first = e->value.data();
    const char* last = first + e->value.size();
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc{} || res.ptr != last) fail(key, "expected a number, got '" + e->value + "'");
    if (!std::isfinite(v)) fail(key, "must be finite");
  }
  resolved_[key] = format_double(v);
  return v;
}

double ConfigReader::real(const std::string& key, double fallback, double lo, double hi) {
  const double v = real(key, fallback);
  if (v < lo || v > hi) fail(key, "must lie in [" + format_double(lo) + ", " + format_double(hi) + "], got " + format_double(v));
  return v;
}

double ConfigReader::positive(const std::string& key, double fallback) {
  const double v = real(key, fallback);
  if (!(v > 0.0)) fail(key, "must be positive, got " + format_double(v));
  return v;
}

int ConfigReader::integer(const std::string& key, int fallback, int lo, int hi) {
  long long v = fallback;
  if (const auto* e = lookup(key)) {
    const char* first = e->value.data();
    const char* last = first + e->value.size();
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc{} || res.ptr != last) fail(key, "expected an integer, got '" + e->value + "'");
  }
  if (v < lo || v > hi) {
    fail(key, "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "], got " + std::to_string(v));
  }
  resolved_[key] = std::to_string(v);
  return static_cast<int>(v);
}

std::uint64_t ConfigReader::unsigned64(const std::string& key, std::uint64_t fallback) {
  std::uint64_t v = fallback;
  if (const auto* e = lookup(key)) {
    const char* first = e->value.data();
    const char* last = first + e->value.size();
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc{} || res.ptr != last) fail(key, "expected a non-negative integer, got '" + e->value + "'");
  }
  resolved_[key] = std::to_string(v);
  return v;
}

std::string ConfigReader::text(const std::string& key, const std::string& fallback) {
  std::string v = fallback;
  if (const auto* e = lookup(key)) v = e->value;
  resolved_[key] = v;
  return v;
}

std::string ConfigReader::choice(const std::string& key, const std::string& fallback,
                                 std::initializer_list<std::string_view> options) {
  const std::string v = text(key, fallback);
  for (auto o : options) {
    if (v == o) return v;
  }
  std::string list;
  for (auto o : options) list += (list.empty() ? "" : ", ") + std::string(o);
  fail(key, "expected one of {" + list + "}, got '" + v + "'");
}

std::vector<int> ConfigReader::integers(const std::string& key, const std::vector<int>& fallback, int lo, int hi) {
  std::vector<int> out = fallback;
  if (const auto* e = lookup(key)) {
    out.clear();
    std::stringstream ss(e->value);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const std::string t = trim(item);
      int v = 0;
      const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
      if (t.empty() || res.ec != std::errc{} || res.ptr != t.data() + t.size()) {
        fail(key, "expected comma-separated integers, got '" + e->value + "'");
      }
      out.push_back(v);
    }
  }
  std::string text;
  for (int v : out) {
    if (v < lo || v > hi) fail(key, "entries must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    text += (text.empty() ? "" : ",") + std::to_string(v);
  }
  if (out.empty()) fail(key, "needs at least one entry");
  resolved_[key] = text;
  return out;
}

void ConfigReader::finish(const std::string& context) const {
  for (const auto& [key, entry] : cfg_.entries()) {
    if (!read_.contains(key)) {
      throw ConfigError(where(entry) + ": field '" + key + "' is not used by " + context);
    }
  }
}

std::string ConfigReader::echo() const {
  std::string out;
  for (const auto& [key, value] : resolved_) out += key + " = " + value + "\n";
  return out;
}

}  // namespace strongcat::cli
