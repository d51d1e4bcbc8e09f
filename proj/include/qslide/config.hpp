#pragma once

#include "qslide/graph.hpp"
#include "qslide/types.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace qslide {

// Configuration or usage problem; the CLI maps this to exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flat `key = value` file: one pair per line, '#' starts a comment, blank
// lines are skipped, duplicate keys are rejected. Values stay strings until
// a typed getter parses them.
class KeyValueConfig {
 public:
  struct Entry {
    std::string value;
    std::string origin;  // "file.cfg:12" or "override"
  };

  static KeyValueConfig parse_file(const std::string& path);
  static KeyValueConfig parse_text(const std::string& text, const std::string& name);

  // "key=value" from the command line; replaces any file value.
  void apply_override(const std::string& assignment);

  bool has(const std::string& key) const { return entries_.count(key) != 0; }
  const std::map<std::string, Entry>& entries() const { return entries_; }

  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  long long get_int(const std::string& key) const;
  long long get_int(const std::string& key, long long fallback) const;
  Real get_real(const std::string& key) const;
  Real get_real(const std::string& key, Real fallback) const;

  // "0110" or "0,1,1,0".
  std::vector<int> get_bits(const std::string& key) const;
  std::vector<Real> get_real_list(const std::string& key) const;
  std::vector<int> get_int_list(const std::string& key) const;

 private:
  std::map<std::string, Entry> entries_;
};

SlideVariant parse_slide_variant(const std::string& name);

}  // namespace qslide
