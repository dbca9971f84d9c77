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

#ifndef FIELDCAST_SYNTHETIC_HPP
#define FIELDCAST_SYNTHETIC_HPP

#include <array>
#include <cstdint>
#include <vector>

#include "fieldcast/dataset.hpp"

namespace fieldcast {

/// One spatially localized oscillation: a Gaussian footprint around a
/// center, pulsing with its own period and phase.
struct BasisBump {
  double cx = 0.5;
  double cy = 0.5;
  double length_scale = 0.5;  // Gaussian width, in field units
  double weight = 1.0;        // Celsius amplitude at the center
  double period_s = 86400.0;
  double phase = 0.0;
};

/// Everything that defines a synthetic sensor field. The generated reading
/// for sensor s at time t is
///   base + diurnal_amplitude * sin(2 pi t / diurnal_period_s)
///        + sum_b weight_b * exp(-|pos_s - c_b|^2 / length_b^2)
///                         * sin(2 pi t / period_b + phase_b)
///        + N(0, noise_sd^2),
/// clamped to valid_range.
struct FieldConfig {
  int n_sensors = 23;
  // Sensor positions in the unit square. Left empty, positions are drawn
  // uniformly from the seed before any noise is drawn.
  std::vector<std::array<double, 2>> positions;
  int n_samples = 2000;
  double dt_s = 300.0;
  std::int64_t t0_s = 0;
  double base = 15.0;
  double diurnal_amplitude = 6.0;
  double diurnal_period_s = 86400.0;
  std::vector<BasisBump> bumps;
  double noise_sd = 0.0;
  std::uint64_t seed = 0;
  ValueRange valid_range;

  void validate() const;  // ConfigError naming the offending field
};

/// Uniform positions in the unit square, deterministic in the seed.
std::vector<std::array<double, 2>> random_positions(int n, std::uint64_t seed);

/// Generates the dataset described by cfg. Bit-identical for equal configs.
/// Sensor ids are "s01", "s02", ... zero-padded to the sensor count's width.
Dataset gen_synthetic(const FieldConfig& cfg);

/// The fixed desk-scale field used by the bundled experiments: 23 sensors,
/// diurnal cycle plus three basis bumps, 2000 samples at 5 min spacing.
/// noise_sd and seed are left at the defaults for callers to set.
FieldConfig reference_field();

}  // namespace fieldcast

#endif  // FIELDCAST_SYNTHETIC_HPP
