#include "qslide/config.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace qslide {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) parts.push_back(trim(item));
  return parts;
}

[[noreturn]] void bad_value(const std::string& key, const KeyValueConfig::Entry& e,
                            const std::string& expected) {
  throw ConfigError(e.origin + ": key '" + key + "': expected " + expected + ", got '" +
                    e.value + "'");
}

}  // namespace

KeyValueConfig KeyValueConfig::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_text(text.str(), path);
}

KeyValueConfig KeyValueConfig::parse_text(const std::string& text, const std::string& name) {
  KeyValueConfig cfg;
  std::istringstream in(text);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    std::string origin = name + ":" + std::to_string(number);
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(origin + ": expected 'key = value', got '" + line + "'");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(origin + ": empty key");
    if (!cfg.entries_.emplace(key, Entry{value, origin}).second)
      throw ConfigError(origin + ": duplicate key '" + key + "'");
  }
  return cfg;
}

void KeyValueConfig::apply_override(const std::string& assignment) {
  size_t eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0)
    throw ConfigError("override '" + assignment + "' is not of the form key=value");
  std::string key = trim(assignment.substr(0, eq));
  std::string value = trim(assignment.substr(eq + 1));
  entries_[key] = Entry{value, "override"};
}

std::string KeyValueConfig::get_string(const std::string& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) throw ConfigError("missing required key '" + key + "'");
  return it->second.value;
}

std::string KeyValueConfig::get_string(const std::string& key, const std::string& fallback) const {
  auto it = entries_.find(key);
  return it == entries_.end() ? fallback : it->second.value;
}

long long KeyValueConfig::get_int(const std::string& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) throw ConfigError("missing required key '" + key + "'");
  const Entry& e = it->second;
  try {
    size_t used = 0;
    long long v = std::stoll(e.value, &used);
    if (used != e.value.size()) bad_value(key, e, "an integer");
    return v;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    bad_value(key, e, "an integer");
  }
}

long long KeyValueConfig::get_int(const std::string& key, long long fallback) const {
  return has(key) ? get_int(key) : fallback;
}

Real KeyValueConfig::get_real(const std::string& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) throw ConfigError("missing required key '" + key + "'");
  const Entry& e = it->second;
  try {
    size_t used = 0;
    Real v = std::stod(e.value, &used);
    if (used != e.value.size()) bad_value(key, e, "a number");
    return v;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    bad_value(key, e, "a number");
  }
}

Real KeyValueConfig::get_real(const std::string& key, Real fallback) const {
  return has(key) ? get_real(key) : fallback;
}

std::vector<int> KeyValueConfig::get_bits(const std::string& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) throw ConfigError("missing required key '" + key + "'");
  const Entry& e = it->second;
  std::string compact;
  for (char c : e.value)
    if (c != ',' && c != ' ') compact += c;
  std::vector<int> bits;
  for (char c : compact) {
    if (c != '0' && c != '1') bad_value(key, e, "a bit string such as 0110");
    bits.push_back(c - '0');
  }
  if (bits.empty()) bad_value(key, e, "a bit string such as 0110");
  return bits;
}

std::vector<Real> KeyValueConfig::get_real_list(const std::string& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) throw ConfigError("missing required key '" + key + "'");
  const Entry& e = it->second;
  std::vector<Real> values;
  for (const std::string& part : split(e.value, ',')) {
    if (part.empty()) bad_value(key, e, "a comma-separated number list");
    try {
      size_t used = 0;
      values.push_back(std::stod(part, &used));
      if (used != part.size()) bad_value(key, e, "a comma-separated number list");
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception&) {
      bad_value(key, e, "a comma-separated number list");
    }
  }
  if (values.empty()) bad_value(key, e, "a comma-separated number list");
  return values;
}

std::vector<int> KeyValueConfig::get_int_list(const std::string& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) throw ConfigError("missing required key '" + key + "'");
  const Entry& e = it->second;
  std::vector<int> values;
  for (const std::string& part : split(e.value, ',')) {
    try {
      size_t used = 0;
      long long v = std::stoll(part, &used);
      if (used != part.size()) bad_value(key, e, "a comma-separated integer list");
      values.push_back(static_cast<int>(v));
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception&) {
      bad_value(key, e, "a comma-separated integer list");
    }
  }
  if (values.empty()) bad_value(key, e, "a comma-separated integer list");
  return values;
}

SlideVariant parse_slide_variant(const std::string& name) {
  if (name == "main_text") return SlideVariant::main_text;
  if (name == "supplement") return SlideVariant::supplement;
  throw ConfigError("slide_variant must be 'main_text' or 'supplement', got '" + name + "'");
}

}  // namespace qslide
