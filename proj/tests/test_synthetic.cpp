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

#include <cmath>
#include <numbers>
#include <vector>

#include "fieldcast/synthetic.hpp"

using namespace fieldcast;

namespace {

// Long-hand reimplementation of the documented field model, kept separate
// from the library code so generator regressions cannot hide.
double expected_reading(const FieldConfig& cfg, double px, double py,
                        double t_s) {
  const double two_pi = 2.0 * std::numbers::pi;
  double v = cfg.base;
  v += cfg.diurnal_amplitude * std::sin(two_pi * t_s / cfg.diurnal_period_s);
  for (const BasisBump& b : cfg.bumps) {
    const double d2 = (px - b.cx) * (px - b.cx) + (py - b.cy) * (py - b.cy);
    const double envelope = std::exp(-d2 / (b.length_scale * b.length_scale));
    v += b.weight * envelope * std::sin(two_pi * t_s / b.period_s + b.phase);
  }
  if (v < cfg.valid_range.lo) v = cfg.valid_range.lo;
  if (v > cfg.valid_range.hi) v = cfg.valid_range.hi;
  return v;
}

FieldConfig small_field() {
  FieldConfig cfg;
  cfg.n_sensors = 4;
  cfg.positions = {{0.1, 0.2}, {0.5, 0.5}, {0.9, 0.1}, {0.3, 0.8}};
  cfg.n_samples = 50;
  cfg.dt_s = 600.0;
  cfg.t0_s = 1000;
  cfg.base = 14.0;
  cfg.diurnal_amplitude = 5.0;
  cfg.bumps = {{0.5, 0.5, 0.4, 3.0, 43200.0, 0.7},
               {0.2, 0.7, 0.6, 2.0, 21600.0, 2.1}};
  return cfg;
}

}  // namespace

TEST_CASE("noiseless readings match the closed-form field") {
  const FieldConfig cfg = small_field();
  const Dataset d = gen_synthetic(cfg);
  REQUIRE(d.n_samples() == 50);
  REQUIRE(d.n_sensors() == 4);
  for (int i = 0; i < 50; ++i) {
    CHECK(d.timestamps[i] == 1000 + 600 * i);
    for (int s = 0; s < 4; ++s) {
      const double want = expected_reading(cfg, cfg.positions[s][0],
                                           cfg.positions[s][1], 600.0 * i);
      CHECK(d.readings(i, s) == doctest::Approx(want).epsilon(1e-12));
    }
  }
}

TEST_CASE("a sensor at a bump center sees the full bump amplitude") {
  FieldConfig cfg;
  cfg.n_sensors = 2;
  cfg.positions = {{0.5, 0.5}, {40.0, 40.0}};  // second sensor far away
  cfg.n_samples = 24;
  cfg.dt_s = 3600.0;
  cfg.base = 15.0;
  cfg.diurnal_amplitude = 0.0;
  cfg.bumps = {{0.5, 0.5, 0.3, 5.0, 43200.0, 0.0}};
  const Dataset d = gen_synthetic(cfg);

  const double two_pi = 2.0 * std::numbers::pi;
  for (int i = 0; i < 24; ++i) {
    const double t = 3600.0 * i;
    CHECK(d.readings(i, 0) ==
          doctest::Approx(15.0 + 5.0 * std::sin(two_pi * t / 43200.0))
              .epsilon(1e-12));
    // the Gaussian footprint has decayed to nothing at distance ~56
    CHECK(d.readings(i, 1) == doctest::Approx(15.0).epsilon(1e-12));
  }
}

TEST_CASE("co-located sensors read identically without noise") {
  FieldConfig cfg = small_field();
  cfg.n_sensors = 2;
  cfg.positions = {{0.4, 0.6}, {0.4, 0.6}};
  const Dataset d = gen_synthetic(cfg);
  CHECK((d.readings.col(0).array() == d.readings.col(1).array()).all());
}

TEST_CASE("generation is reproducible bit for bit") {
  FieldConfig cfg = reference_field();
  cfg.n_samples = 100;
  cfg.noise_sd = 0.5;
  const Dataset a = gen_synthetic(cfg);
  const Dataset b = gen_synthetic(cfg);
  CHECK(a.timestamps == b.timestamps);
  CHECK((a.readings.array() == b.readings.array()).all());
}

TEST_CASE("auto positions come from the seed, ahead of the noise draws") {
  FieldConfig drawn = reference_field();
  drawn.n_samples = 60;
  drawn.positions.clear();

  FieldConfig pinned = drawn;
  pinned.positions = random_positions(pinned.n_sensors, pinned.seed);

  // same seed, same layout, so the noiseless fields agree exactly
  const Dataset a = gen_synthetic(drawn);
  const Dataset b = gen_synthetic(pinned);
  CHECK((a.readings.array() == b.readings.array()).all());

  // turning noise on must not move the sensors
  FieldConfig noisy = drawn;
  noisy.noise_sd = 0.4;
  const Dataset c = gen_synthetic(noisy);
  const Eigen::MatrixXd diff = c.readings - a.readings;
  CHECK(std::abs(diff.mean()) < 0.05);
  const double sd = std::sqrt(diff.array().square().mean());
  CHECK(sd > 0.3);
  CHECK(sd < 0.5);
}

TEST_CASE("random positions stay inside the unit square") {
  const auto pos = random_positions(50, 3);
  CHECK(pos.size() == 50);
  for (const auto& p : pos) {
    CHECK(p[0] >= 0.0);
    CHECK(p[0] <= 1.0);
    CHECK(p[1] >= 0.0);
    CHECK(p[1] <= 1.0);
  }
  CHECK(random_positions(50, 3) == pos);
  CHECK(random_positions(50, 4) != pos);
}

TEST_CASE("readings are clamped to the valid range") {
  FieldConfig cfg = small_field();
  cfg.base = 58.0;
  cfg.diurnal_amplitude = 6.0;
  const Dataset d = gen_synthetic(cfg);
  CHECK(d.readings.maxCoeff() == 60.0);  // hit the ceiling, stayed on it
  CHECK(d.readings.minCoeff() >= -20.0);
}

TEST_CASE("sensor ids are zero-padded to the fleet width") {
  FieldConfig cfg = reference_field();
  cfg.n_samples = 5;
  const Dataset d = gen_synthetic(cfg);
  CHECK(d.sensor_ids.front() == "s01");
  CHECK(d.sensor_ids[8] == "s09");
  CHECK(d.sensor_ids.back() == "s23");

  FieldConfig small = small_field();
  small.n_sensors = 9;
  small.positions.clear();
  const Dataset e = gen_synthetic(small);
  CHECK(e.sensor_ids.front() == "s1");
  CHECK(e.sensor_ids.back() == "s9");
}

TEST_CASE("field validation names the offending key") {
  FieldConfig cfg = small_field();
  SUBCASE("sensors") {
    cfg.n_sensors = 0;
    cfg.positions.clear();
    CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("sensors"),
                         ConfigError);
  }
  SUBCASE("dt below one second") {
    cfg.dt_s = 0.5;
    CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("dt"),
                         ConfigError);
  }
  SUBCASE("position count") {
    cfg.positions.pop_back();
    CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("positions"),
                         ConfigError);
  }
  SUBCASE("bad basis entry") {
    cfg.bumps[1].length_scale = 0.0;
    CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("basis entry 2"),
                         ConfigError);
  }
  SUBCASE("inverted range") {
    cfg.valid_range = {30.0, 10.0};
    CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("range_min"),
                         ConfigError);
  }
}

TEST_CASE("the reference field is well formed") {
  const FieldConfig cfg = reference_field();
  CHECK_NOTHROW(cfg.validate());
  CHECK(cfg.n_sensors == 23);
  CHECK(cfg.n_samples == 2000);
  CHECK(cfg.bumps.size() == 3);
  CHECK(cfg.noise_sd == 0.0);

  FieldConfig quick = cfg;
  quick.n_samples = 50;
  const Dataset d = gen_synthetic(quick);
  CHECK(d.readings.minCoeff() > -20.0);
  CHECK(d.readings.maxCoeff() < 60.0);
}
