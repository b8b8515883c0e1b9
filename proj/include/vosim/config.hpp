#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

namespace vosim {

// Flat "key = value" configuration. Lines starting with '#' (after whitespace)
// and blank lines are ignored; duplicate keys are an error. Every key must be
// consumed by a getter before check_all_consumed(), so typos fail loudly.
class Config {
 public:
  Config() = default;

  static Config parse_file(const std::string& path);
  static Config parse_string(const std::string& text);

  bool has(const std::string& key) const { return kv_.count(key) > 0; }

  // Getters mark the key consumed. The no-default forms throw ConfigError
  // when the key is missing.
  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& dflt) const;
  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double dflt) const;
  int get_int(const std::string& key) const;
  int get_int(const std::string& key, int dflt) const;
  bool get_bool(const std::string& key) const;
  bool get_bool(const std::string& key, bool dflt) const;
  std::vector<double> get_double_list(const std::string& key) const;

  // Set or overwrite a key (sweep overrides, preset expansion).
  void set(const std::string& key, const std::string& value);
  // Insert only if absent (presets supply defaults, explicit keys win).
  void set_default(const std::string& key, const std::string& value);

  // Throws listing every key never consumed by a getter.
  void check_all_consumed() const;

  // Canonical text form: keys sorted, one per line.
  std::string serialize() const;

  const std::map<std::string, std::string>& raw() const { return kv_; }

 private:
  std::string fetch(const std::string& key) const;

  std::map<std::string, std::string> kv_;
  mutable std::set<std::string> consumed_;
};

}  // namespace vosim
