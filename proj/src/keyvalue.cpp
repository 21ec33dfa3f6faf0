#include "kdvbbm/keyvalue.hpp"

#include <cctype>
#include <charconv>
#include <fstream>

#include "kdvbbm/errors.hpp"

namespace kdvbbm {
namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

}  // namespace

std::optional<std::string> KeyValueBlock::get(const std::string& key) const {
  auto it = values.find(key);
  if (it == values.end()) return std::nullopt;
  return it->second;
}

std::optional<double> KeyValueBlock::number(const std::string& key,
                                            std::vector<std::string>& errors,
                                            const std::string& where) const {
  auto v = get(key);
  if (!v) return std::nullopt;
  double out = 0.0;
  const char* first = v->data();
  const char* last = first + v->size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || ptr != last) {
    errors.push_back(where + key + ": not a number: '" + *v + "'");
    return std::nullopt;
  }
  return out;
}

void KeyValueBlock::reject_unknown(const std::set<std::string>& allowed,
                                   std::vector<std::string>& errors,
                                   const std::string& where) const {
  for (const auto& [k, v] : values)
    if (!allowed.count(k)) errors.push_back(where + k + ": unknown key");
}

KeyValueDocument parse_key_value(std::istream& in) {
  KeyValueDocument doc;
  KeyValueBlock* current = &doc.top;
  std::vector<std::string> errors;
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    const std::string at = "line " + std::to_string(lineno) + ": ";
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) {
        errors.push_back(at + "malformed section header");
        continue;
      }
      const std::string name = trim(line.substr(1, line.size() - 2));
      if (doc.sections.count(name)) errors.push_back(at + "duplicate section [" + name + "]");
      current = &doc.sections[name];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      errors.push_back(at + "expected `key = value`");
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      errors.push_back(at + "empty key");
      continue;
    }
    if (!current->values.emplace(key, value).second)
      errors.push_back(at + "duplicate key '" + key + "'");
  }
  if (!errors.empty()) throw ConfigError(errors);
  return doc;
}

KeyValueDocument parse_key_value_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({"cannot open config file '" + path + "'"});
  return parse_key_value(in);
}

}  // namespace kdvbbm
