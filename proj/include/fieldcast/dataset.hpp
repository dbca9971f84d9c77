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

#ifndef FIELDCAST_DATASET_HPP
#define FIELDCAST_DATASET_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "fieldcast/errors.hpp"
#include "fieldcast/network.hpp"

namespace fieldcast {

/// Closed interval of physically plausible readings, in Celsius.
struct ValueRange {
  double lo = -20.0;
  double hi = 60.0;

  bool contains(double x) const { return x >= lo && x <= hi; }
  double width() const { return hi - lo; }
  double mid() const { return 0.5 * (lo + hi); }
};

/// Timestamped readings for a set of sensor locations. Rows are samples,
/// columns are sensors, values are Celsius.
struct Dataset {
  std::vector<std::string> sensor_ids;
  std::vector<std::int64_t> timestamps;  // epoch seconds, strictly increasing
  Eigen::MatrixXd readings;              // n_samples x n_sensors
  ValueRange valid_range;
  int dropped_rows = 0;  // rows removed by the missing-value policy on load

  Eigen::Index n_samples() const { return readings.rows(); }
  Eigen::Index n_sensors() const { return readings.cols(); }

  /// Column index of a sensor id; throws DataError for unknown ids.
  Eigen::Index sensor_index(const std::string& id) const;

  /// Checks shape consistency, timestamp monotonicity and the reading range.
  /// Throws DataError with the offending cell or sensor named.
  void validate() const;

  /// Readings restricted to the named sensors, columns in the given order.
  Eigen::MatrixXd columns_for(const std::vector<std::string>& ids) const;
};

/// Which sensors stay deployed (network inputs) and which were taken away
/// (network outputs, to be reconstructed).
struct SubsetSplit {
  std::vector<std::string> fixed_ids;
  std::vector<std::string> moved_ids;

  /// Both lists non-empty, disjoint, and together exactly the dataset's ids.
  void validate(const Dataset& d) const;
};

enum class NormStrategy {
  kGlobalRange,      // valid_range -> [-1, 1], identical for every sensor
  kPerSensorMinMax,  // each sensor's observed [min, max] -> [-1, 1]
};

std::string norm_strategy_name(NormStrategy s);
NormStrategy parse_norm_strategy(const std::string& name);

/// Per-sensor affine map taking Celsius to normalized units:
/// normalized = (celsius - offset) / scale.
struct NormParams {
  std::vector<std::string> sensor_ids;
  Eigen::VectorXd offsets;
  Eigen::VectorXd scales;  // strictly positive
  NormStrategy strategy = NormStrategy::kGlobalRange;

  Eigen::Index index_of(const std::string& id) const;  // DataError if unknown
  void validate() const;
};

NormParams fit_normalizer(const Dataset& d,
                          NormStrategy strategy = NormStrategy::kGlobalRange);

/// Maps a Celsius matrix whose columns correspond to `ids` into normalized
/// units, column by column. denormalize inverts it exactly (affine).
Eigen::MatrixXd normalize(const NormParams& np,
                          const std::vector<std::string>& ids,
                          const Eigen::MatrixXd& celsius);
Eigen::MatrixXd denormalize(const NormParams& np,
                            const std::vector<std::string>& ids,
                            const Eigen::MatrixXd& normalized);

/// Assignment of every sample to one of k cross-validation folds.
struct FoldPlan {
  int k = 0;
  std::vector<int> assignment;  // per sample, in [0, k)
  std::uint64_t seed = 0;

  void validate() const;

  /// Sample indices per fold, ascending within each fold.
  std::vector<std::vector<Eigen::Index>> fold_indices() const;
};

/// Seeded random permutation chunked into k near-equal folds (sizes differ by
/// at most one). Deterministic given (n_samples, k, seed).
FoldPlan split_kfold(Eigen::Index n_samples, int k, std::uint64_t seed);

/// One splitmix64 round over base ^ salt; used to derive independent
/// sub-seeds (per fold, per grid cell) from one experiment seed.
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t salt);

enum class SubsetMethod { kExplicitList, kGreedyCorrelation };

std::string subset_method_name(SubsetMethod m);
SubsetMethod parse_subset_method(const std::string& name);

/// |Pearson correlation| between every pair of reading columns; zero-variance
/// columns correlate 0 with everything by convention.
Eigen::MatrixXd abs_correlation(const Eigen::MatrixXd& readings);

/// Chooses the fixed subset. kExplicitList takes `explicit_fixed` verbatim
/// (its length must equal n_fixed). kGreedyCorrelation repeatedly adds the
/// sensor whose inclusion maximizes the weakest coverage, i.e. maximizes
///   min over uncovered u of (max over f in fixed+candidate of |corr(f, u)|),
/// ties broken by dataset sensor order. Moved ids are the rest, in dataset
/// order.
SubsetSplit select_subsets(const Dataset& d, int n_fixed, SubsetMethod method,
                           const std::vector<std::string>& explicit_fixed = {});

/// Normalized training pairs for the split: inputs are the fixed columns,
/// targets the moved columns. `rows` selects a sample subset; the overload
/// without it uses every sample.
SampleBatch make_batch(const Dataset& d, const SubsetSplit& split,
                       const NormParams& np);
SampleBatch make_batch(const Dataset& d, const SubsetSplit& split,
                       const NormParams& np,
                       const std::vector<Eigen::Index>& rows);

}  // namespace fieldcast

#endif  // FIELDCAST_DATASET_HPP
