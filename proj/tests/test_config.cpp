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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>

#include "fieldcast/config.hpp"

using namespace fieldcast;

TEST_CASE("key=value parsing skips comments and blank lines") {
  const auto cfg = KeyValueConfig::parse_string(
      "# a comment\n"
      "\n"
      "iterations = 1000\n"
      "  method=hybrid   # trailing comment\n"
      "name = spaced value\n");
  CHECK(cfg.get_int("iterations") == 1000);
  CHECK(cfg.get_string("method") == "hybrid");
  CHECK(cfg.get_string("name") == "spaced value");
  CHECK_FALSE(cfg.has("comment"));
}

TEST_CASE("later assignment to a key wins") {
  const auto cfg =
      KeyValueConfig::parse_string("k = 2\nk = 7\n");
  CHECK(cfg.get_int("k") == 7);
  CHECK(cfg.keys().size() == 1);
}

TEST_CASE("line without '=' is rejected with its line number") {
  CHECK_THROWS_WITH_AS(
      KeyValueConfig::parse_string("a = 1\nnot a pair\n", "test.cfg"),
      doctest::Contains("test.cfg line 2"), ConfigError);
}

TEST_CASE("missing required key is named") {
  const auto cfg = KeyValueConfig::parse_string("a = 1\n");
  CHECK_THROWS_WITH_AS(cfg.get_string("data"),
                       doctest::Contains("missing required key 'data'"),
                       ConfigError);
}

TEST_CASE("typed getters name the key on a bad value") {
  const auto cfg = KeyValueConfig::parse_string(
      "iterations = soon\nnoise = much\nseed = -3\nflag = maybe\n");
  CHECK_THROWS_WITH_AS(cfg.get_int("iterations"),
                       doctest::Contains("key 'iterations'"), ConfigError);
  CHECK_THROWS_WITH_AS(cfg.get_double("noise"),
                       doctest::Contains("key 'noise'"), ConfigError);
  CHECK_THROWS_WITH_AS(cfg.get_seed("seed"), doctest::Contains("key 'seed'"),
                       ConfigError);
  CHECK_THROWS_WITH_AS(cfg.get_bool("flag"), doctest::Contains("key 'flag'"),
                       ConfigError);
}

TEST_CASE("defaulted getters fall back only when the key is absent") {
  const auto cfg = KeyValueConfig::parse_string("k = 3\n");
  CHECK(cfg.get_int("k", 5) == 3);
  CHECK(cfg.get_int("folds", 5) == 5);
  CHECK(cfg.get_double("noise_sd", 0.25) == 0.25);
  CHECK(cfg.get_bool("timing", false) == false);
  CHECK(cfg.get_string("method", "hybrid") == "hybrid");
}

TEST_CASE("split_list trims and drops empty pieces") {
  CHECK(split_list(" a, b ,c") == std::vector<std::string>{"a", "b", "c"});
  CHECK(split_list("").empty());
  CHECK(split_list("one") == std::vector<std::string>{"one"});
}

TEST_CASE("positions parse as semicolon-separated pairs") {
  const auto pos = parse_positions("positions", "0.1,0.2; 0.3,0.4;");
  REQUIRE(pos.size() == 2);
  CHECK(pos[0][0] == 0.1);
  CHECK(pos[1][1] == 0.4);
  CHECK(parse_positions("positions", "").empty());
  CHECK_THROWS_WITH_AS(parse_positions("positions", "0.1,0.2; 0.3"),
                       doctest::Contains("entry 2"), ConfigError);
}

TEST_CASE("basis entries need all six numbers") {
  const auto bumps = parse_basis("basis", "0.5,0.5,0.4,3,43200,0");
  REQUIRE(bumps.size() == 1);
  CHECK(bumps[0].length_scale == 0.4);
  CHECK(bumps[0].period_s == 43200.0);
  CHECK_THROWS_WITH_AS(parse_basis("basis", "0.5,0.5,0.4,3,43200"),
                       doctest::Contains("key 'basis'"), ConfigError);
}

TEST_CASE("seed lists reject junk and emptiness") {
  CHECK(parse_seed_list("seeds", "1,2,3") ==
        std::vector<std::uint64_t>{1, 2, 3});
  CHECK_THROWS_AS(parse_seed_list("seeds", "1,,2"), ConfigError);
  CHECK_THROWS_AS(parse_seed_list("seeds", ""), ConfigError);
}

TEST_CASE("field config picks up overrides over reference defaults") {
  const auto cfg = KeyValueConfig::parse_string(
      "sensors = 6\nsamples = 50\nnoise_sd = 0.25\nseed = 11\n"
      "basis = 0.2,0.2,0.5,2,43200,0; 0.8,0.8,0.5,1,21600,1\n");
  const FieldConfig f = field_config_from(cfg);
  CHECK(f.n_sensors == 6);
  CHECK(f.n_samples == 50);
  CHECK(f.noise_sd == 0.25);
  CHECK(f.seed == 11);
  REQUIRE(f.bumps.size() == 2);
  CHECK(f.bumps[1].weight == 1.0);
  // untouched keys keep the reference field values
  CHECK(f.base == 15.0);
  CHECK(f.diurnal_period_s == 86400.0);
}

TEST_CASE("an empty basis value clears the reference bumps") {
  const auto cfg = KeyValueConfig::parse_string("basis =\n");
  CHECK(field_config_from(cfg).bumps.empty());
}
