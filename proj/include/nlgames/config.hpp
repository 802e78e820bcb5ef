// Copyright 2026 The nlgames Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <yaml-cpp/yaml.h>

#include <charconv>
#include <cstdint>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "nlgames/error.hpp"

namespace nlgames {

// Flat key -> scalar (or list of scalars) configuration read from YAML mappings.
class Config {
 public:
  struct Entry {
    std::string value;
    std::string origin;  // "source:line"
  };

  static Config from_string(const std::string& text, const std::string& source = "<config>") {
    YAML::Node root;
    try {
      root = YAML::Load(text);
    } catch (const YAML::Exception& e) {
      throw ConfigError(source + ":" + std::to_string(e.mark.line + 1) + ": " + e.msg);
    }
    Config c;
    if (!root || root.IsNull()) return c;
    if (!root.IsMap()) throw ConfigError(source + ":" + line_of(root) + ": top level must be a key: value mapping");
    for (const auto& kv : root) {
      const std::string origin = source + ":" + line_of(kv.first);
      if (!kv.first.IsScalar()) throw ConfigError(origin + ": keys must be scalars");
      const std::string key = kv.first.Scalar();
      std::string value;
      if (kv.second.IsScalar()) {
        value = kv.second.Scalar();
      } else if (kv.second.IsSequence()) {
        for (std::size_t i = 0; i < kv.second.size(); ++i) {
          if (!kv.second[i].IsScalar()) throw ConfigError(origin + ": list entries of '" + key + "' must be scalars");
          if (i) value += ",";
          value += kv.second[i].Scalar();
        }
      } else if (kv.second.IsNull()) {
        throw ConfigError(origin + ": key '" + key + "' has no value");
      } else {
        throw ConfigError(origin + ": nested mappings are not supported (key '" + key + "')");
      }
      if (c.entries_.count(key)) throw ConfigError(origin + ": duplicate key '" + key + "'");
      c.entries_[key] = {value, origin};
    }
    return c;
  }

  static Config from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path + ": cannot open config file");
    std::stringstream ss;
    ss << in.rdbuf();
    return from_string(ss.str(), path);
  }

  // Later sources override earlier ones.
  void merge(const Config& other) {
    for (const auto& [k, e] : other.entries_) entries_[k] = e;
  }

  // "key=value" from the command line.
  void set(std::string_view assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos || eq == 0)
      throw ConfigError("--set " + std::string(assignment) + ": expected key=value");
    entries_[std::string(assignment.substr(0, eq))] = {std::string(assignment.substr(eq + 1)), "--set"};
  }

  bool has(const std::string& key) const { return entries_.count(key) > 0; }
  const std::map<std::string, Entry>& entries() const { return entries_; }

  std::string get_string(const std::string& key) const { return entry(key).value; }
  std::string get_string(const std::string& key, const std::string& def) const {
    return has(key) ? get_string(key) : def;
  }

  double get_double(const std::string& key) const { return parse_double(entry(key).value, key); }
  double get_double(const std::string& key, double def) const { return has(key) ? get_double(key) : def; }

  long long get_int(const std::string& key) const { return parse_int(entry(key).value, key); }
  long long get_int(const std::string& key, long long def) const { return has(key) ? get_int(key) : def; }

  bool get_bool(const std::string& key, bool def) const {
    if (!has(key)) return def;
    const std::string v = entry(key).value;
    if (v == "true" || v == "yes" || v == "1" || v == "on") return true;
    if (v == "false" || v == "no" || v == "0" || v == "off") return false;
    throw ConfigError(entry(key).origin + ": key '" + key + "' expects a boolean, got '" + v + "'");
  }

  std::vector<double> get_doubles(const std::string& key) const {
    std::vector<double> out;
    for (const auto& tok : split(entry(key).value)) out.push_back(parse_double(tok, key));
    return out;
  }
  std::vector<double> get_doubles(const std::string& key, std::vector<double> def) const {
    return has(key) ? get_doubles(key) : def;
  }
  std::vector<int> get_ints(const std::string& key) const {
    std::vector<int> out;
    for (const auto& tok : split(entry(key).value)) out.push_back(static_cast<int>(parse_int(tok, key)));
    return out;
  }
  std::vector<int> get_ints(const std::string& key, std::vector<int> def) const {
    return has(key) ? get_ints(key) : def;
  }

  // Every key must be in the allowed set.
  void require_known(const std::set<std::string>& allowed) const {
    for (const auto& [k, e] : entries_)
      if (!allowed.count(k)) throw ConfigError(e.origin + ": unknown key '" + k + "'");
  }

  std::string canonical() const {
    std::string s;
    for (const auto& [k, e] : entries_) s += k + "=" + e.value + "\n";
    return s;
  }

  // 64-bit FNV-1a of the canonical form.
  std::uint64_t hash() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : canonical()) {
      h ^= ch;
      h *= 0x100000001b3ULL;
    }
    return h;
  }

 private:
  static std::string line_of(const YAML::Node& n) { return std::to_string(n.Mark().line + 1); }

  const Entry& entry(const std::string& key) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) throw ConfigError("missing required key '" + key + "'");
    return it->second;
  }

  static std::vector<std::string> split(const std::string& v) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(v);
    while (std::getline(in, cur, ',')) {
      const auto a = cur.find_first_not_of(" \t");
      const auto b = cur.find_last_not_of(" \t");
      out.push_back(a == std::string::npos ? "" : cur.substr(a, b - a + 1));
    }
    return out;
  }

  double parse_double(const std::string& v, const std::string& key) const {
    double x = 0.0;
    const auto r = std::from_chars(v.data(), v.data() + v.size(), x);
    if (r.ec != std::errc() || r.ptr != v.data() + v.size())
      throw ConfigError(origin_of(key) + ": key '" + key + "' expects a number, got '" + v + "'");
    return x;
  }

  long long parse_int(const std::string& v, const std::string& key) const {
    long long x = 0;
    const auto r = std::from_chars(v.data(), v.data() + v.size(), x);
    if (r.ec != std::errc() || r.ptr != v.data() + v.size())
      throw ConfigError(origin_of(key) + ": key '" + key + "' expects an integer, got '" + v + "'");
    return x;
  }

  std::string origin_of(const std::string& key) const {
    auto it = entries_.find(key);
    return it == entries_.end() ? "<config>" : it->second.origin;
  }

  std::map<std::string, Entry> entries_;
};

}  // namespace nlgames
