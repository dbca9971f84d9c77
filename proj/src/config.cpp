// Copyright 2026 The Fieldcast Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "fieldcast/config.hpp"

#include <cctype>
#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace fieldcast {
namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0;
  std::size_t b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::vector<std::string> split_on(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string piece;
  std::stringstream ss(text);
  while (std::getline(ss, piece, sep)) out.push_back(trim(piece));
  return out;
}

std::int64_t to_int(const std::string& key, const std::string& v) {
  char* end = nullptr;
  errno = 0;
  const long long x = std::strtoll(v.c_str(), &end, 10);
  if (v.empty() || errno != 0 || end != v.c_str() + v.size()) {
    throw ConfigError("key '" + key + "': expected integer, got '" + v + "'");
  }
  return x;
}

std::uint64_t to_seed(const std::string& key, const std::string& v) {
  char* end = nullptr;
  errno = 0;
  const unsigned long long x = std::strtoull(v.c_str(), &end, 10);
  if (v.empty() || v[0] == '-' || errno != 0 ||
      end != v.c_str() + v.size()) {
    throw ConfigError("key '" + key + "': expected unsigned seed, got '" + v +
                      "'");
  }
  return x;
}

double to_double(const std::string& key, const std::string& v) {
  char* end = nullptr;
  errno = 0;
  const double x = std::strtod(v.c_str(), &end);
  if (v.empty() || errno == ERANGE || end != v.c_str() + v.size()) {
    throw ConfigError("key '" + key + "': expected number, got '" + v + "'");
  }
  return x;
}

std::vector<double> to_doubles(const std::string& key,
                               const std::string& segment,
                               std::size_t expect, std::size_t entry) {
  const std::vector<std::string> parts = split_on(segment, ',');
  if (parts.size() != expect) {
    std::ostringstream os;
    os << "key '" << key << "': entry " << entry << " has " << parts.size()
       << " numbers, expected " << expect;
    throw ConfigError(os.str());
  }
  std::vector<double> out;
  out.reserve(expect);
  for (const auto& p : parts) out.push_back(to_double(key, p));
  return out;
}

}  // namespace

KeyValueConfig KeyValueConfig::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_string(buf.str(), path);
}

KeyValueConfig KeyValueConfig::parse_string(const std::string& text,
                                            const std::string& origin) {
  KeyValueConfig cfg;
  cfg.origin_ = origin;
  std::stringstream ss(text);
  std::string line;
  int line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      std::ostringstream os;
      os << origin << " line " << line_no << ": expected key = value";
      throw ConfigError(os.str());
    }
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) {
      std::ostringstream os;
      os << origin << " line " << line_no << ": empty key";
      throw ConfigError(os.str());
    }
    cfg.set(key, trim(line.substr(eq + 1)));
  }
  return cfg;
}

bool KeyValueConfig::has(const std::string& key) const {
  return values_.count(key) > 0;
}

std::vector<std::string> KeyValueConfig::keys() const { return order_; }

void KeyValueConfig::set(const std::string& key, const std::string& value) {
  if (!values_.count(key)) order_.push_back(key);
  values_[key] = value;
}

std::string KeyValueConfig::get_string(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) {
    throw ConfigError("missing required key '" + key + "'");
  }
  return it->second;
}

std::string KeyValueConfig::get_string(const std::string& key,
                                       const std::string& fallback) const {
  return has(key) ? values_.at(key) : fallback;
}

std::int64_t KeyValueConfig::get_int(const std::string& key) const {
  return to_int(key, get_string(key));
}

std::int64_t KeyValueConfig::get_int(const std::string& key,
                                     std::int64_t fallback) const {
  return has(key) ? to_int(key, values_.at(key)) : fallback;
}

double KeyValueConfig::get_double(const std::string& key) const {
  return to_double(key, get_string(key));
}

double KeyValueConfig::get_double(const std::string& key,
                                  double fallback) const {
  return has(key) ? to_double(key, values_.at(key)) : fallback;
}

std::uint64_t KeyValueConfig::get_seed(const std::string& key) const {
  return to_seed(key, get_string(key));
}

std::uint64_t KeyValueConfig::get_seed(const std::string& key,
                                       std::uint64_t fallback) const {
  return has(key) ? to_seed(key, values_.at(key)) : fallback;
}

bool KeyValueConfig::get_bool(const std::string& key) const {
  const std::string v = get_string(key);
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError("key '" + key + "': expected true or false, got '" + v +
                    "'");
}

bool KeyValueConfig::get_bool(const std::string& key, bool fallback) const {
  return has(key) ? get_bool(key) : fallback;
}

std::vector<std::array<double, 2>> parse_positions(const std::string& key,
                                                   const std::string& text) {
  std::vector<std::array<double, 2>> out;
  if (trim(text).empty()) return out;
  const std::vector<std::string> entries = split_on(text, ';');
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].empty()) continue;  // tolerate a trailing ';'
    const std::vector<double> xy = to_doubles(key, entries[i], 2, i + 1);
    out.push_back({xy[0], xy[1]});
  }
  return out;
}

std::vector<BasisBump> parse_basis(const std::string& key,
                                   const std::string& text) {
  std::vector<BasisBump> out;
  if (trim(text).empty()) return out;
  const std::vector<std::string> entries = split_on(text, ';');
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].empty()) continue;
    const std::vector<double> v = to_doubles(key, entries[i], 6, i + 1);
    out.push_back({v[0], v[1], v[2], v[3], v[4], v[5]});
  }
  return out;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  for (auto& piece : split_on(text, ',')) {
    if (!piece.empty()) out.push_back(std::move(piece));
  }
  return out;
}

std::vector<std::uint64_t> parse_seed_list(const std::string& key,
                                           const std::string& text) {
  std::vector<std::uint64_t> out;
  for (const auto& piece : split_on(text, ',')) {
    out.push_back(to_seed(key, piece));
  }
  if (out.empty()) {
    throw ConfigError("key '" + key + "': empty seed list");
  }
  return out;
}

FieldConfig field_config_from(const KeyValueConfig& cfg) {
  FieldConfig f = reference_field();
  f.n_sensors = static_cast<int>(cfg.get_int("sensors", f.n_sensors));
  f.n_samples = static_cast<int>(cfg.get_int("samples", f.n_samples));
  f.dt_s = cfg.get_double("dt", f.dt_s);
  f.t0_s = cfg.get_int("t0", f.t0_s);
  f.base = cfg.get_double("base", f.base);
  f.diurnal_amplitude =
      cfg.get_double("diurnal_amplitude", f.diurnal_amplitude);
  f.diurnal_period_s = cfg.get_double("period", f.diurnal_period_s);
  f.noise_sd = cfg.get_double("noise_sd", f.noise_sd);
  f.seed = cfg.get_seed("seed", f.seed);
  f.valid_range.lo = cfg.get_double("range_min", f.valid_range.lo);
  f.valid_range.hi = cfg.get_double("range_max", f.valid_range.hi);
  if (cfg.has("positions")) {
    f.positions = parse_positions("positions", cfg.get_string("positions"));
  }
  if (cfg.has("basis")) {
    f.bumps = parse_basis("basis", cfg.get_string("basis"));
  }
  return f;
}

}  // namespace fieldcast
