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

#include "fieldcast/evaluation.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <sstream>
#include <thread>

namespace fieldcast {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

Dataset subset_rows(const Dataset& d, const std::vector<Eigen::Index>& rows) {
  Dataset out;
  out.sensor_ids = d.sensor_ids;
  out.valid_range = d.valid_range;
  out.timestamps.reserve(rows.size());
  out.readings.resize(static_cast<Eigen::Index>(rows.size()), d.n_sensors());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.timestamps.push_back(d.timestamps[static_cast<std::size_t>(rows[i])]);
    out.readings.row(static_cast<Eigen::Index>(i)) = d.readings.row(rows[i]);
  }
  return out;
}

[[noreturn]] void rethrow_with_fold(std::exception_ptr ep, int fold) {
  const std::string tag = "fold " + std::to_string(fold) + ": ";
  try {
    std::rethrow_exception(ep);
  } catch (const ConfigError& e) {
    throw ConfigError(tag + e.what());
  } catch (const IoError& e) {
    throw IoError(tag + e.what());
  } catch (const ShapeError& e) {
    throw ShapeError(tag + e.what());
  } catch (const DataError& e) {
    throw DataError(tag + e.what());
  } catch (const TrainError& e) {
    throw TrainError(tag + e.what());
  } catch (const std::exception& e) {
    throw TrainError(tag + e.what());
  }
}

double sample_sd(const std::vector<double>& xs, double mean) {
  if (xs.size() < 2) return 0.0;
  double acc = 0.0;
  for (double x : xs) acc += (x - mean) * (x - mean);
  return std::sqrt(acc / static_cast<double>(xs.size() - 1));
}

double median_of(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  const std::size_t n = xs.size();
  if (n % 2 == 1) return xs[n / 2];
  return 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

}  // namespace

double abs_error(const Eigen::MatrixXd& targets, const Eigen::MatrixXd& preds) {
  if (targets.rows() != preds.rows() || targets.cols() != preds.cols()) {
    std::ostringstream os;
    os << "abs_error shapes disagree: " << targets.rows() << "x"
       << targets.cols() << " vs " << preds.rows() << "x" << preds.cols();
    throw ShapeError(os.str());
  }
  if (!targets.allFinite() || !preds.allFinite()) {
    throw DataError("abs_error: non-finite entry");
  }
  const auto cells = static_cast<double>(targets.size());
  return (targets - preds).array().abs().sum() / cells;
}

void Model::validate() const {
  net.spec().validate();
  if (net.spec().input_size() !=
      static_cast<int>(split.fixed_ids.size())) {
    std::ostringstream os;
    os << "network input layer is " << net.spec().input_size()
       << " wide but the fixed subset has " << split.fixed_ids.size()
       << " sensors";
    throw ShapeError(os.str());
  }
  if (net.spec().output_size() !=
      static_cast<int>(split.moved_ids.size())) {
    std::ostringstream os;
    os << "network output layer is " << net.spec().output_size()
       << " wide but the moved subset has " << split.moved_ids.size()
       << " sensors";
    throw ShapeError(os.str());
  }
  for (const auto& id : split.fixed_ids) norm.index_of(id);
  for (const auto& id : split.moved_ids) norm.index_of(id);
  norm.validate();
}

Reconstruction reconstruct(const Model& model,
                           const std::vector<std::int64_t>& timestamps,
                           const Eigen::MatrixXd& fixed_readings) {
  model.validate();
  const auto n_fixed = static_cast<Eigen::Index>(model.split.fixed_ids.size());
  if (fixed_readings.cols() != n_fixed) {
    std::ostringstream os;
    os << "input has " << fixed_readings.cols() << " columns but the model's "
       << "fixed subset has " << n_fixed << " sensors";
    throw ShapeError(os.str());
  }
  if (static_cast<Eigen::Index>(timestamps.size()) != fixed_readings.rows()) {
    std::ostringstream os;
    os << "timestamp count " << timestamps.size()
       << " does not match input rows " << fixed_readings.rows();
    throw ShapeError(os.str());
  }
  for (Eigen::Index r = 0; r < fixed_readings.rows(); ++r) {
    for (Eigen::Index c = 0; c < fixed_readings.cols(); ++c) {
      const double v = fixed_readings(r, c);
      if (!std::isfinite(v) || !model.valid_range.contains(v)) {
        std::ostringstream os;
        os << "input reading " << v << " at row " << r << ", sensor '"
           << model.split.fixed_ids[static_cast<std::size_t>(c)]
           << "' outside valid range [" << model.valid_range.lo << ", "
           << model.valid_range.hi << "]";
        throw DataError(os.str());
      }
    }
  }

  const Eigen::MatrixXd inputs =
      normalize(model.norm, model.split.fixed_ids, fixed_readings);
  const Eigen::MatrixXd outputs = model.net.forward_batch(inputs);
  Eigen::MatrixXd estimates =
      denormalize(model.norm, model.split.moved_ids, outputs);

  Reconstruction rec;
  rec.timestamps = timestamps;
  rec.moved_ids = model.split.moved_ids;
  rec.model_id = model.model_id;
  rec.fixed_readings = fixed_readings;
  for (Eigen::Index r = 0; r < estimates.rows(); ++r) {
    for (Eigen::Index c = 0; c < estimates.cols(); ++c) {
      double& v = estimates(r, c);
      if (!std::isfinite(v)) {
        throw TrainError("model produced a non-finite estimate");
      }
      if (!model.valid_range.contains(v)) {
        v = std::clamp(v, model.valid_range.lo, model.valid_range.hi);
        rec.clamped.emplace_back(r, c);
      }
    }
  }
  rec.estimates = std::move(estimates);
  return rec;
}

void CvConfig::validate() const {
  if (k < 2) throw ConfigError("k must be >= 2");
  if (n_threads < 1) throw ConfigError("threads must be >= 1");
}

CvReport cross_validate(const Dataset& d, const SubsetSplit& split,
                        const NetworkSpec& spec, const TrainConfig& train_cfg,
                        const CvConfig& cv) {
  const auto start = Clock::now();
  cv.validate();
  train_cfg.validate();
  spec.validate();
  split.validate(d);
  if (static_cast<Eigen::Index>(cv.k) > d.n_samples()) {
    std::ostringstream os;
    os << "k=" << cv.k << " exceeds the " << d.n_samples() << " samples";
    throw ConfigError(os.str());
  }
  if (spec.input_size() != static_cast<int>(split.fixed_ids.size())) {
    std::ostringstream os;
    os << "architecture input layer is " << spec.input_size()
       << " but the fixed subset has " << split.fixed_ids.size()
       << " sensors";
    throw ConfigError(os.str());
  }
  if (spec.output_size() != static_cast<int>(split.moved_ids.size())) {
    std::ostringstream os;
    os << "architecture output layer is " << spec.output_size()
       << " but the moved subset has " << split.moved_ids.size()
       << " sensors";
    throw ConfigError(os.str());
  }

  const FoldPlan plan = split_kfold(d.n_samples(), cv.k, cv.seed);
  const auto folds = plan.fold_indices();

  CvReport report;
  report.folds.resize(static_cast<std::size_t>(cv.k));
  report.spec = spec;
  report.split = split;
  report.train_cfg = train_cfg;
  report.cv_cfg = cv;

  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(cv.k));

  auto run_fold = [&](int f) {
    const auto fold_start = Clock::now();
    const auto& test_rows = folds[static_cast<std::size_t>(f)];
    std::vector<Eigen::Index> train_rows;
    train_rows.reserve(static_cast<std::size_t>(d.n_samples()) -
                       test_rows.size());
    for (Eigen::Index i = 0; i < d.n_samples(); ++i) {
      if (plan.assignment[static_cast<std::size_t>(i)] != f) {
        train_rows.push_back(i);
      }
    }

    // Normalization is fitted on the training folds only, so the held-out
    // fold stays unseen end to end.
    const Dataset train_data = subset_rows(d, train_rows);
    const NormParams np = fit_normalizer(train_data, cv.norm_strategy);
    const SampleBatch train_batch = make_batch(d, split, np, train_rows);

    NetworkSpec fold_spec = spec;
    fold_spec.init_seed = mix_seed(cv.seed, static_cast<std::uint64_t>(f));
    const Network net = build_network(fold_spec);
    const TrainTrace trace = train(net, train_batch, train_cfg);

    Model model{trace.final_net, np, split, d.valid_range, ""};
    const Dataset test_data = subset_rows(d, test_rows);
    const Reconstruction rec =
        reconstruct(model, test_data.timestamps,
                    test_data.columns_for(split.fixed_ids));
    const Eigen::MatrixXd targets = test_data.columns_for(split.moved_ids);

    FoldRecord rec_out;
    rec_out.fold = f;
    rec_out.n_train = static_cast<Eigen::Index>(train_rows.size());
    rec_out.n_test = static_cast<Eigen::Index>(test_rows.size());
    rec_out.train_sse = trace.records.back().sse;
    rec_out.test_sse = (targets - rec.estimates).squaredNorm();
    rec_out.test_abs_error = abs_error(targets, rec.estimates);
    rec_out.wall_s = seconds_since(fold_start);
    report.folds[static_cast<std::size_t>(f)] = rec_out;
  };

  if (cv.n_threads <= 1) {
    for (int f = 0; f < cv.k; ++f) {
      try {
        run_fold(f);
      } catch (...) {
        rethrow_with_fold(std::current_exception(), f);
      }
    }
  } else {
    std::atomic<int> next{0};
    auto worker = [&] {
      for (int f = next.fetch_add(1); f < cv.k; f = next.fetch_add(1)) {
        try {
          run_fold(f);
        } catch (...) {
          errors[static_cast<std::size_t>(f)] = std::current_exception();
        }
      }
    };
    const int n_workers = std::min(cv.n_threads, cv.k);
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_workers));
    for (int t = 0; t < n_workers; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    for (int f = 0; f < cv.k; ++f) {
      if (errors[static_cast<std::size_t>(f)]) {
        rethrow_with_fold(errors[static_cast<std::size_t>(f)], f);
      }
    }
  }

  std::vector<double> abs_errors;
  abs_errors.reserve(report.folds.size());
  for (const auto& fr : report.folds) abs_errors.push_back(fr.test_abs_error);
  double mean = 0.0;
  for (double e : abs_errors) mean += e;
  mean /= static_cast<double>(abs_errors.size());
  report.mean_abs_error = mean;
  report.sd_abs_error = sample_sd(abs_errors, mean);
  report.total_wall_s = seconds_since(start);
  return report;
}

CompareReport compare_methods(
    const Dataset& d, const SubsetSplit& split,
    const std::vector<std::pair<std::string, NetworkSpec>>& presets,
    const std::vector<Method>& methods, const TrainConfig& base_cfg,
    const CvConfig& cv, const std::vector<std::uint64_t>& seeds) {
  const auto start = Clock::now();
  if (seeds.empty()) throw ConfigError("seeds list is empty");
  if (presets.empty()) throw ConfigError("presets list is empty");
  if (methods.empty()) throw ConfigError("methods list is empty");

  CompareReport report;
  report.seeds = seeds;
  report.base_cfg = base_cfg;
  report.cv_cfg = cv;
  report.split = split;
  report.methods = methods;
  for (const auto& [name, spec] : presets) report.preset_names.push_back(name);

  for (Method method : methods) {
    for (const auto& [name, spec] : presets) {
      CompareCell cell;
      cell.method = method;
      cell.preset_name = name;
      for (std::uint64_t seed : seeds) {
        TrainConfig cfg = base_cfg;
        cfg.method = method;
        CvConfig cell_cv = cv;
        cell_cv.seed = seed;
        const CvReport r = cross_validate(d, split, spec, cfg, cell_cv);
        cell.abs_error_per_seed.push_back(r.mean_abs_error);
        cell.wall_s_per_seed.push_back(r.total_wall_s);
      }
      double mean = 0.0;
      double wall = 0.0;
      for (double e : cell.abs_error_per_seed) mean += e;
      for (double w : cell.wall_s_per_seed) wall += w;
      mean /= static_cast<double>(cell.abs_error_per_seed.size());
      wall /= static_cast<double>(cell.wall_s_per_seed.size());
      cell.mean_abs_error = mean;
      cell.mean_wall_s = wall;
      cell.median_abs_error = median_of(cell.abs_error_per_seed);
      cell.sd_abs_error = sample_sd(cell.abs_error_per_seed, mean);
      report.cells.push_back(std::move(cell));
    }
  }
  report.total_wall_s = seconds_since(start);
  return report;
}

}  // namespace fieldcast
