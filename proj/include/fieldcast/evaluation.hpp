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

#ifndef FIELDCAST_EVALUATION_HPP
#define FIELDCAST_EVALUATION_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "fieldcast/dataset.hpp"
#include "fieldcast/network.hpp"
#include "fieldcast/optimizers.hpp"

namespace fieldcast {

/// Mean absolute difference in Celsius, averaged over samples and sensors,
/// so the result is one scalar regardless of how many outputs there are.
double abs_error(const Eigen::MatrixXd& targets, const Eigen::MatrixXd& preds);

/// A trained network bundled with everything needed to run it on raw
/// Celsius data: normalization, the subset split, and the physical range.
struct Model {
  Network net;
  NormParams norm;
  SubsetSplit split;
  ValueRange valid_range;
  std::string model_id;  // deterministic content hash, set on save

  void validate() const;  // shapes of net vs split
};

/// Estimated readings at the moved locations, in Celsius.
struct Reconstruction {
  std::vector<std::int64_t> timestamps;
  std::vector<std::string> moved_ids;
  Eigen::MatrixXd estimates;  // m x |moved|, Celsius
  // (row, column) cells whose raw estimate fell outside valid_range and was
  // clamped onto it.
  std::vector<std::pair<Eigen::Index, Eigen::Index>> clamped;
  std::string model_id;
  Eigen::MatrixXd fixed_readings;  // the inputs used, Celsius
};

/// normalize -> forward -> denormalize for every row of fixed_readings,
/// whose columns must follow model.split.fixed_ids. Inputs outside
/// model.valid_range are rejected; estimates outside it are clamped and
/// recorded.
Reconstruction reconstruct(const Model& model,
                           const std::vector<std::int64_t>& timestamps,
                           const Eigen::MatrixXd& fixed_readings);

/// One cross-validation fold's outcome. train_sse is the final training
/// objective in normalized units; the test metrics are Celsius, computed
/// after denormalization.
struct FoldRecord {
  int fold = 0;
  Eigen::Index n_train = 0;
  Eigen::Index n_test = 0;
  double train_sse = 0.0;
  double test_sse = 0.0;
  double test_abs_error = 0.0;
  double wall_s = 0.0;
};

struct CvConfig {
  int k = 5;
  std::uint64_t seed = 0;
  int n_threads = 1;  // folds run serially when 1; results identical either way
  NormStrategy norm_strategy = NormStrategy::kGlobalRange;

  void validate() const;
};

struct CvReport {
  std::vector<FoldRecord> folds;
  double mean_abs_error = 0.0;
  double sd_abs_error = 0.0;  // sample standard deviation over folds
  double total_wall_s = 0.0;

  // Echo of the experiment configuration, so the report is self-describing.
  NetworkSpec spec;
  SubsetSplit split;
  TrainConfig train_cfg;
  CvConfig cv_cfg;
};

/// Per fold: derive a fresh init seed from (cv.seed, fold), train on the
/// other k-1 folds, score on the held-out fold. Deterministic given the
/// inputs; thread count does not change the result.
CvReport cross_validate(const Dataset& d, const SubsetSplit& split,
                        const NetworkSpec& spec, const TrainConfig& train_cfg,
                        const CvConfig& cv);

/// One (method, architecture) cell of the comparison grid.
struct CompareCell {
  Method method = Method::kHybrid;
  std::string preset_name;
  std::vector<double> abs_error_per_seed;  // aligned with the seed list
  std::vector<double> wall_s_per_seed;
  double mean_abs_error = 0.0;
  double median_abs_error = 0.0;
  double sd_abs_error = 0.0;
  double mean_wall_s = 0.0;
};

struct CompareReport {
  std::vector<CompareCell> cells;  // methods outer, presets inner
  std::vector<std::uint64_t> seeds;
  std::vector<std::string> preset_names;
  std::vector<Method> methods;
  TrainConfig base_cfg;
  CvConfig cv_cfg;
  SubsetSplit split;
  double total_wall_s = 0.0;
};

/// Runs cross_validate for every method x preset x seed. Each cell's entry
/// for seeds[j] equals a standalone cross_validate call with cv.seed =
/// seeds[j]; the grid adds nothing but the loop.
CompareReport compare_methods(
    const Dataset& d, const SubsetSplit& split,
    const std::vector<std::pair<std::string, NetworkSpec>>& presets,
    const std::vector<Method>& methods, const TrainConfig& base_cfg,
    const CvConfig& cv, const std::vector<std::uint64_t>& seeds);

}  // namespace fieldcast

#endif  // FIELDCAST_EVALUATION_HPP
