#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace sslab::app {

enum class Kind {
  exponents,
  verify_identities,
  spectrum,
  shoot,
  scan,
  evolve_rescaled,
  blowup,
  theorem13,
};

std::string to_string(Kind kind);
/// Accepts the subcommand spelling ("verify-identities", ...). Throws UsageError.
Kind parse_kind(std::string_view text);

using Value = std::variant<std::int64_t, double, bool, std::string>;

/// A validated run configuration: every schema key present, typed, in range.
///
/// The text form is a flat list of `key = value` lines; `#` starts a comment.
/// Serialization is canonical (schema order, doubles with 17 significant
/// digits), so parse(serialize(c)) == c.
class RunConfig {
 public:
  [[nodiscard]] Kind kind() const;
  [[nodiscard]] std::int64_t integer(const std::string& key) const;
  [[nodiscard]] double real(const std::string& key) const;
  [[nodiscard]] bool flag(const std::string& key) const;
  [[nodiscard]] const std::string& text(const std::string& key) const;
  [[nodiscard]] const std::map<std::string, Value>& values() const { return values_; }

  [[nodiscard]] std::string serialize() const;
  /// SHA-256 of serialize().
  [[nodiscard]] std::string hash() const;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;

 private:
  friend class ConfigBuilder;
  std::map<std::string, Value> values_;
};

/// A key that appears both in the file and on the command line.
struct Override {
  std::string key;
  std::string file_value;
  std::string flag_value;
};

/// Collects raw `key = value` assignments from files and flags, then types,
/// defaults and validates them. Later sources win; overrides of file values by
/// flags are recorded.
class ConfigBuilder {
 public:
  /// Throws UsageError on malformed lines or unknown keys (naming the key).
  void add_text(const std::string& text, const std::string& origin);
  void add_file(const std::string& path);
  /// A single `key=value` from the command line.
  void add_flag(const std::string& assignment);
  void set_flag(const std::string& key, const std::string& value);

  /// Types every value, fills defaults (some depend on n and p) and checks
  /// constraints. Throws UsageError naming the offending key.
  [[nodiscard]] RunConfig build() const;

  [[nodiscard]] const std::vector<Override>& overrides() const { return overrides_; }
  [[nodiscard]] const std::map<std::string, std::string>& file_values() const { return file_; }
  [[nodiscard]] const std::map<std::string, std::string>& flag_values() const { return flags_; }

 private:
  std::map<std::string, std::string> file_;
  std::map<std::string, std::string> flags_;
  std::vector<Override> overrides_;
};

/// Parses a complete config text (no flags).
RunConfig parse_config(const std::string& text);

/// Schema keys in canonical order.
std::vector<std::string> config_keys();

/// Human-readable schema listing: key, type, default, constraint.
std::string schema_description();

}  // namespace sslab::app
