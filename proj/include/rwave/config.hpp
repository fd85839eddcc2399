#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace rwave {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ValueType { integer, unsigned_integer, real, boolean, choice, list };

struct SchemaEntry {
  std::string key;
  ValueType type;
  std::string default_value;
  std::vector<std::string> choices;  // for choice and list entries
  std::string doc;
};

/// Every key accepted in a config file, in canonical order.
const std::vector<SchemaEntry>& config_schema();

/// Resolved configuration: every schema key present, values validated.
class Config {
 public:
  /// All defaults.
  Config();

  /// "key = value" lines; '#' starts a comment. Unknown keys and malformed
  /// values raise ConfigError naming the key and line.
  static Config parse(std::istream& is, const std::string& source = "<config>");
  static Config parse_string(const std::string& text);
  static Config load(const std::string& path);

  /// Validated assignment (command-line overrides use this too).
  void set(const std::string& key, const std::string& value);

  const std::string& raw(const std::string& key) const;
  long integer(const std::string& key) const;
  std::uint64_t unsigned_integer(const std::string& key) const;
  double real(const std::string& key) const;
  bool boolean(const std::string& key) const;
  std::vector<std::string> list(const std::string& key) const;

  /// Canonical text: schema order, one "key = value" per line.
  std::string serialize() const;
  /// FNV-1a 64 of serialize(), as 16 hex digits.
  std::string digest() const;

  bool operator==(const Config&) const = default;

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace rwave
