#pragma once

// Experiment configuration: a small key-value text format with [sections] and
// '#' comments, or a JSON object of sections (detected by a leading '{').
// Values are kept as strings; typed getters parse on demand.  parse(serialize)
// is the identity on the parsed map.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "zklab/core.hpp"

namespace zklab {

inline std::string format_double_cfg(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct Config {
  // section -> key -> value; unsectioned keys live in section "".
  std::map<std::string, std::map<std::string, std::string>> sections;

  bool has(const std::string& sec, const std::string& key) const {
    auto s = sections.find(sec);
    return s != sections.end() && s->second.count(key) > 0;
  }
  std::string get(const std::string& sec, const std::string& key,
                  const std::string& fallback = "") const {
    auto s = sections.find(sec);
    if (s == sections.end()) return fallback;
    auto k = s->second.find(key);
    return k == s->second.end() ? fallback : k->second;
  }
  std::string require(const std::string& sec, const std::string& key) const {
    if (!has(sec, key))
      throw ConfigError("config: missing required key '" +
                        (sec.empty() ? key : sec + "." + key) + "'");
    return get(sec, key);
  }
  void set(const std::string& sec, const std::string& key, const std::string& v) {
    sections[sec][key] = v;
  }

  double get_double(const std::string& sec, const std::string& key, double fb) const {
    const std::string v = get(sec, key);
    if (v.empty()) return fb;
    try {
      std::size_t pos = 0;
      const double d = std::stod(v, &pos);
      if (pos != v.size()) throw std::invalid_argument(v);
      return d;
    } catch (const std::exception&) {
      throw ConfigError("config: key '" + sec + "." + key + "' is not a number: '" + v + "'");
    }
  }
  long long get_int(const std::string& sec, const std::string& key, long long fb) const {
    const std::string v = get(sec, key);
    if (v.empty()) return fb;
    try {
      std::size_t pos = 0;
      const long long i = std::stoll(v, &pos);
      if (pos != v.size()) throw std::invalid_argument(v);
      return i;
    } catch (const std::exception&) {
      throw ConfigError("config: key '" + sec + "." + key + "' is not an integer: '" + v + "'");
    }
  }
  bool get_bool(const std::string& sec, const std::string& key, bool fb) const {
    const std::string v = get(sec, key);
    if (v.empty()) return fb;
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError("config: key '" + sec + "." + key + "' is not a boolean: '" + v + "'");
  }

  // Comma- or space-separated list; "4..64" expands dyadically (4 8 16 32 64).
  std::vector<double> get_list(const std::string& sec, const std::string& key) const {
    std::vector<double> out;
    std::string v = get(sec, key);
    std::replace(v.begin(), v.end(), ',', ' ');
    std::istringstream in(v);
    std::string tok;
    while (in >> tok) {
      const auto dots = tok.find("..");
      if (dots != std::string::npos) {
        const double lo = std::stod(tok.substr(0, dots));
        const double hi = std::stod(tok.substr(dots + 2));
        if (!(lo > 0.0) || hi < lo)
          throw ConfigError("config: bad dyadic range '" + tok + "' in " + sec + "." + key);
        for (double x = lo; x <= hi * (1.0 + 1e-12); x *= 2.0) out.push_back(x);
      } else {
        try {
          out.push_back(std::stod(tok));
        } catch (const std::exception&) {
          throw ConfigError("config: bad list item '" + tok + "' in " + sec + "." + key);
        }
      }
    }
    return out;
  }
  std::vector<long long> get_int_list(const std::string& sec, const std::string& key) const {
    std::vector<long long> out;
    for (double d : get_list(sec, key)) out.push_back(std::llround(d));
    return out;
  }
};

inline Config parse_config_text(const std::string& text) {
  Config cfg;
  std::istringstream in(text);
  std::string line, sec;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto issp = [](unsigned char c) { return std::isspace(c) != 0; };
    while (!line.empty() && issp(line.back())) line.pop_back();
    std::size_t st = 0;
    while (st < line.size() && issp(line[st])) ++st;
    line.erase(0, st);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("config line " + std::to_string(lineno) + ": unterminated section");
      sec = line.substr(1, line.size() - 2);
      cfg.sections[sec];  // record even if empty
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    std::string key = line.substr(0, eq), val = line.substr(eq + 1);
    while (!key.empty() && issp(key.back())) key.pop_back();
    std::size_t vs = 0;
    while (vs < val.size() && issp(val[vs])) ++vs;
    val.erase(0, vs);
    if (key.empty())
      throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
    cfg.sections[sec][key] = val;
  }
  return cfg;
}

inline Config parse_config_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: JSON parse error: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config: JSON root must be an object");
  Config cfg;
  auto scalar = [](const nlohmann::json& v) -> std::string {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    if (v.is_number()) return format_double_cfg(v.get<double>());
    throw ConfigError("config: JSON values must be scalars or arrays of scalars");
  };
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (it.value().is_object()) {
      for (auto kv = it.value().begin(); kv != it.value().end(); ++kv) {
        if (kv.value().is_array()) {
          std::string list;
          for (const auto& e : kv.value()) {
            if (!list.empty()) list += ' ';
            list += scalar(e);
          }
          cfg.sections[it.key()][kv.key()] = list;
        } else {
          cfg.sections[it.key()][kv.key()] = scalar(kv.value());
        }
      }
    } else if (it.value().is_array()) {
      std::string list;
      for (const auto& e : it.value()) {
        if (!list.empty()) list += ' ';
        list += scalar(e);
      }
      cfg.sections[""][it.key()] = list;
    } else {
      cfg.sections[""][it.key()] = scalar(it.value());
    }
  }
  return cfg;
}

inline Config parse_config(const std::string& text) {
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    return c == '{' ? parse_config_json(text) : parse_config_text(text);
  }
  return Config{};
}

inline Config load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

inline std::string serialize_config(const Config& cfg) {
  std::ostringstream out;
  // Unsectioned keys first, then sections in map order; keys sorted by map.
  auto emit = [&](const std::map<std::string, std::string>& kv) {
    for (const auto& e : kv) out << e.first << " = " << e.second << '\n';
  };
  auto root = cfg.sections.find("");
  if (root != cfg.sections.end()) emit(root->second);
  for (const auto& s : cfg.sections) {
    if (s.first.empty()) continue;
    out << '[' << s.first << "]\n";
    emit(s.second);
  }
  return out.str();
}

}  // namespace zklab
