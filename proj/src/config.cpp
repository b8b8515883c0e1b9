#include "vosim/config.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "vosim/errors.hpp"

namespace vosim {
namespace {

std::string trim(const std::string& s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

double to_double(const std::string& key, const std::string& v) {
  // accept plain numbers and simple ratios like "1/300"
  const size_t slash = v.find('/');
  char* end = nullptr;
  if (slash != std::string::npos) {
    const std::string num = trim(v.substr(0, slash));
    const std::string den = trim(v.substr(slash + 1));
    const double a = std::strtod(num.c_str(), &end);
    if (end == num.c_str() || *end != '\0') {
      throw ConfigError("config key '" + key + "': bad number '" + v + "'");
    }
    const double b = std::strtod(den.c_str(), &end);
    if (end == den.c_str() || *end != '\0' || b == 0.0) {
      throw ConfigError("config key '" + key + "': bad ratio '" + v + "'");
    }
    return a / b;
  }
  const double x = std::strtod(v.c_str(), &end);
  if (end == v.c_str() || *end != '\0') {
    throw ConfigError("config key '" + key + "': bad number '" + v + "'");
  }
  return x;
}

}  // namespace

Config Config::parse_string(const std::string& text) {
  Config cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const size_t eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": expected 'key = value', got '" + t + "'");
    }
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
    }
    if (cfg.kv_.count(key)) {
      throw ConfigError("config line " + std::to_string(lineno) + ": duplicate key '" +
                        key + "'");
    }
    cfg.kv_[key] = value;
  }
  return cfg;
}

Config Config::parse_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_string(ss.str());
}

std::string Config::fetch(const std::string& key) const {
  const auto it = kv_.find(key);
  if (it == kv_.end()) throw ConfigError("missing required config key '" + key + "'");
  consumed_.insert(key);
  return it->second;
}

std::string Config::get_string(const std::string& key) const { return fetch(key); }

std::string Config::get_string(const std::string& key, const std::string& dflt) const {
  if (!has(key)) return dflt;
  return fetch(key);
}

double Config::get_double(const std::string& key) const {
  return to_double(key, fetch(key));
}

double Config::get_double(const std::string& key, double dflt) const {
  if (!has(key)) return dflt;
  return get_double(key);
}

int Config::get_int(const std::string& key) const {
  const double x = get_double(key);
  const int i = static_cast<int>(x);
  if (static_cast<double>(i) != x) {
    throw ConfigError("config key '" + key + "': expected an integer");
  }
  return i;
}

int Config::get_int(const std::string& key, int dflt) const {
  if (!has(key)) return dflt;
  return get_int(key);
}

bool Config::get_bool(const std::string& key) const {
  std::string v = fetch(key);
  for (auto& c : v) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (v == "true" || v == "1" || v == "on" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "off" || v == "no") return false;
  throw ConfigError("config key '" + key + "': expected a boolean, got '" + v + "'");
}

bool Config::get_bool(const std::string& key, bool dflt) const {
  if (!has(key)) return dflt;
  return get_bool(key);
}

std::vector<double> Config::get_double_list(const std::string& key) const {
  const std::string v = fetch(key);
  std::vector<double> out;
  std::string item;
  std::istringstream ss(v);
  while (std::getline(ss, item, ',')) {
    const std::string t = trim(item);
    if (t.empty()) throw ConfigError("config key '" + key + "': empty list entry");
    out.push_back(to_double(key, t));
  }
  if (out.empty()) throw ConfigError("config key '" + key + "': empty list");
  return out;
}

void Config::set(const std::string& key, const std::string& value) {
  kv_[key] = value;
}

void Config::set_default(const std::string& key, const std::string& value) {
  kv_.emplace(key, value);
}

void Config::check_all_consumed() const {
  std::string unknown;
  for (const auto& [k, v] : kv_) {
    if (!consumed_.count(k)) {
      if (!unknown.empty()) unknown += ", ";
      unknown += k;
    }
  }
  if (!unknown.empty()) {
    throw ConfigError("unrecognized config keys: " + unknown);
  }
}

std::string Config::serialize() const {
  std::string out;
  for (const auto& [k, v] : kv_) {
    out += k;
    out += " = ";
    out += v;
    out += "\n";
  }
  return out;
}

}  // namespace vosim
