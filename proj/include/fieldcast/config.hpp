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

#ifndef FIELDCAST_CONFIG_HPP
#define FIELDCAST_CONFIG_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "fieldcast/errors.hpp"
#include "fieldcast/synthetic.hpp"

namespace fieldcast {

/// Line-oriented `key = value` configuration. '#' starts a comment, blank
/// lines are ignored, later assignments to a key replace earlier ones.
/// Every diagnostic names the key (or line) it is about.
class KeyValueConfig {
public:
  static KeyValueConfig parse_file(const std::string& path);
  static KeyValueConfig parse_string(const std::string& text,
                                     const std::string& origin = "config");

  bool has(const std::string& key) const;
  std::vector<std::string> keys() const;  // insertion order

  // Required getters: throw ConfigError("missing required key 'k'").
  std::string get_string(const std::string& key) const;
  std::int64_t get_int(const std::string& key) const;
  double get_double(const std::string& key) const;
  std::uint64_t get_seed(const std::string& key) const;
  bool get_bool(const std::string& key) const;  // true/false/1/0

  // Defaulted getters.
  std::string get_string(const std::string& key,
                         const std::string& fallback) const;
  std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
  double get_double(const std::string& key, double fallback) const;
  std::uint64_t get_seed(const std::string& key,
                         std::uint64_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;

  void set(const std::string& key, const std::string& value);

private:
  std::string origin_;
  std::map<std::string, std::string> values_;
  std::vector<std::string> order_;
};

/// "x,y; x,y; ..." -> list of 2-D points. Key named in diagnostics.
std::vector<std::array<double, 2>> parse_positions(const std::string& key,
                                                   const std::string& text);

/// "cx,cy,length,weight,period,phase; ..." -> basis bump list.
std::vector<BasisBump> parse_basis(const std::string& key,
                                   const std::string& text);

/// "a,b,c" -> trimmed pieces; empty text -> empty list.
std::vector<std::string> split_list(const std::string& text);

/// Comma list of unsigned seeds; ConfigError names the key.
std::vector<std::uint64_t> parse_seed_list(const std::string& key,
                                           const std::string& text);

/// Builds a FieldConfig from the documented keys (sensors, positions,
/// samples, dt, t0, base, diurnal_amplitude, period, basis, noise_sd, seed,
/// range_min, range_max), all optional with reference-field defaults.
FieldConfig field_config_from(const KeyValueConfig& cfg);

}  // namespace fieldcast

#endif  // FIELDCAST_CONFIG_HPP
