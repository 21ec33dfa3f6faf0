#pragma once

// Flat `key = value` text with at most one level of `[section]` nesting.
// Blank lines and lines starting with '#' are ignored.

#include <istream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace kdvbbm {

struct KeyValueBlock {
  std::map<std::string, std::string> values;

  bool has(const std::string& key) const { return values.count(key) != 0; }
  std::optional<std::string> get(const std::string& key) const;
  /// Parses a number; records a violation and returns nullopt on failure.
  std::optional<double> number(const std::string& key, std::vector<std::string>& errors,
                               const std::string& where = "") const;
  /// Every key not listed in `allowed` becomes a violation.
  void reject_unknown(const std::set<std::string>& allowed, std::vector<std::string>& errors,
                      const std::string& where) const;
};

struct KeyValueDocument {
  KeyValueBlock top;
  std::map<std::string, KeyValueBlock> sections;
};

/// Throws ConfigError listing every malformed line.
KeyValueDocument parse_key_value(std::istream& in);
KeyValueDocument parse_key_value_file(const std::string& path);

}  // namespace kdvbbm
