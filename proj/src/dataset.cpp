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

#include "fieldcast/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

namespace fieldcast {

// --- Dataset ---------------------------------------------------------------

Eigen::Index Dataset::sensor_index(const std::string& id) const {
  for (std::size_t i = 0; i < sensor_ids.size(); ++i) {
    if (sensor_ids[i] == id) return static_cast<Eigen::Index>(i);
  }
  throw DataError("unknown sensor id '" + id + "'");
}

void Dataset::validate() const {
  if (static_cast<Eigen::Index>(sensor_ids.size()) != readings.cols()) {
    std::ostringstream os;
    os << "sensor id count " << sensor_ids.size()
       << " does not match reading columns " << readings.cols();
    throw DataError(os.str());
  }
  if (static_cast<Eigen::Index>(timestamps.size()) != readings.rows()) {
    std::ostringstream os;
    os << "timestamp count " << timestamps.size()
       << " does not match reading rows " << readings.rows();
    throw DataError(os.str());
  }
  std::set<std::string> seen;
  for (const auto& id : sensor_ids) {
    if (id.empty()) throw DataError("empty sensor id");
    if (!seen.insert(id).second) {
      throw DataError("duplicate sensor id '" + id + "'");
    }
  }
  for (std::size_t i = 1; i < timestamps.size(); ++i) {
    if (timestamps[i] <= timestamps[i - 1]) {
      std::ostringstream os;
      os << "timestamps not strictly increasing at row " << i;
      throw DataError(os.str());
    }
  }
  if (!(valid_range.lo < valid_range.hi)) {
    throw DataError("valid_range is empty");
  }
  for (Eigen::Index r = 0; r < readings.rows(); ++r) {
    for (Eigen::Index c = 0; c < readings.cols(); ++c) {
      const double v = readings(r, c);
      if (!std::isfinite(v) || !valid_range.contains(v)) {
        std::ostringstream os;
        os << "reading " << v << " at row " << r << ", sensor '"
           << sensor_ids[static_cast<std::size_t>(c)] << "' outside range ["
           << valid_range.lo << ", " << valid_range.hi << "]";
        throw DataError(os.str());
      }
    }
  }
}

Eigen::MatrixXd Dataset::columns_for(
    const std::vector<std::string>& ids) const {
  Eigen::MatrixXd out(readings.rows(),
                      static_cast<Eigen::Index>(ids.size()));
  for (std::size_t j = 0; j < ids.size(); ++j) {
    out.col(static_cast<Eigen::Index>(j)) = readings.col(sensor_index(ids[j]));
  }
  return out;
}

// --- SubsetSplit -----------------------------------------------------------

void SubsetSplit::validate(const Dataset& d) const {
  if (fixed_ids.empty()) throw DataError("fixed subset is empty");
  if (moved_ids.empty()) throw DataError("moved subset is empty");
  std::set<std::string> fixed(fixed_ids.begin(), fixed_ids.end());
  if (fixed.size() != fixed_ids.size()) {
    throw DataError("fixed subset repeats a sensor id");
  }
  std::set<std::string> all = fixed;
  for (const auto& id : moved_ids) {
    if (fixed.count(id)) {
      throw DataError("sensor '" + id + "' appears in both subsets");
    }
    if (!all.insert(id).second) {
      throw DataError("moved subset repeats sensor '" + id + "'");
    }
  }
  if (all.size() != d.sensor_ids.size()) {
    std::ostringstream os;
    os << "subsets cover " << all.size() << " of " << d.sensor_ids.size()
       << " sensors";
    throw DataError(os.str());
  }
  for (const auto& id : d.sensor_ids) {
    if (!all.count(id)) {
      throw DataError("sensor '" + id + "' missing from both subsets");
    }
  }
}

// --- normalization ---------------------------------------------------------

std::string norm_strategy_name(NormStrategy s) {
  switch (s) {
    case NormStrategy::kGlobalRange: return "global";
    case NormStrategy::kPerSensorMinMax: return "per-sensor";
  }
  return "?";
}

NormStrategy parse_norm_strategy(const std::string& name) {
  if (name == "global") return NormStrategy::kGlobalRange;
  if (name == "per-sensor") return NormStrategy::kPerSensorMinMax;
  throw ConfigError("normalization: unknown value '" + name +
                    "' (expected global or per-sensor)");
}

Eigen::Index NormParams::index_of(const std::string& id) const {
  for (std::size_t i = 0; i < sensor_ids.size(); ++i) {
    if (sensor_ids[i] == id) return static_cast<Eigen::Index>(i);
  }
  throw DataError("normalization has no parameters for sensor '" + id + "'");
}

void NormParams::validate() const {
  const auto n = static_cast<Eigen::Index>(sensor_ids.size());
  if (offsets.size() != n || scales.size() != n) {
    throw DataError("normalization parameter lengths disagree");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(scales[i] > 0.0) || !std::isfinite(scales[i]) ||
        !std::isfinite(offsets[i])) {
      throw DataError("normalization scale for sensor '" +
                      sensor_ids[static_cast<std::size_t>(i)] +
                      "' is not strictly positive");
    }
  }
}

NormParams fit_normalizer(const Dataset& d, NormStrategy strategy) {
  const Eigen::Index n = d.n_sensors();
  NormParams np;
  np.sensor_ids = d.sensor_ids;
  np.offsets.resize(n);
  np.scales.resize(n);
  np.strategy = strategy;
  if (strategy == NormStrategy::kGlobalRange) {
    // valid_range maps onto [-1, 1]: offset is the midpoint, scale the
    // half-width.
    np.offsets.setConstant(d.valid_range.mid());
    np.scales.setConstant(0.5 * d.valid_range.width());
  } else {
    for (Eigen::Index c = 0; c < n; ++c) {
      const double lo = d.readings.col(c).minCoeff();
      const double hi = d.readings.col(c).maxCoeff();
      if (!(hi > lo)) {
        throw DataError("sensor '" + d.sensor_ids[static_cast<std::size_t>(c)] +
                        "' has a degenerate value range (min = max = " +
                        std::to_string(lo) + "); per-sensor normalization "
                        "needs spread");
      }
      np.offsets[c] = 0.5 * (lo + hi);
      np.scales[c] = 0.5 * (hi - lo);
    }
  }
  np.validate();
  return np;
}

namespace {

Eigen::MatrixXd affine_map(const NormParams& np,
                           const std::vector<std::string>& ids,
                           const Eigen::MatrixXd& in, bool forward) {
  if (static_cast<Eigen::Index>(ids.size()) != in.cols()) {
    std::ostringstream os;
    os << "id list length " << ids.size() << " does not match matrix columns "
       << in.cols();
    throw ShapeError(os.str());
  }
  Eigen::MatrixXd out(in.rows(), in.cols());
  for (std::size_t j = 0; j < ids.size(); ++j) {
    const Eigen::Index src = np.index_of(ids[j]);
    const auto col = static_cast<Eigen::Index>(j);
    if (forward) {
      out.col(col) = (in.col(col).array() - np.offsets[src]) / np.scales[src];
    } else {
      out.col(col) = in.col(col).array() * np.scales[src] + np.offsets[src];
    }
  }
  return out;
}

}  // namespace

Eigen::MatrixXd normalize(const NormParams& np,
                          const std::vector<std::string>& ids,
                          const Eigen::MatrixXd& celsius) {
  return affine_map(np, ids, celsius, true);
}

Eigen::MatrixXd denormalize(const NormParams& np,
                            const std::vector<std::string>& ids,
                            const Eigen::MatrixXd& normalized) {
  return affine_map(np, ids, normalized, false);
}

// --- k-fold plan -----------------------------------------------------------

void FoldPlan::validate() const {
  if (k < 1) throw DataError("fold plan has k < 1");
  std::vector<Eigen::Index> sizes(static_cast<std::size_t>(k), 0);
  for (int a : assignment) {
    if (a < 0 || a >= k) throw DataError("fold index out of range");
    ++sizes[static_cast<std::size_t>(a)];
  }
  const auto [lo, hi] = std::minmax_element(sizes.begin(), sizes.end());
  if (*lo == 0) throw DataError("fold plan leaves a fold empty");
  if (*hi - *lo > 1) throw DataError("fold sizes differ by more than one");
}

std::vector<std::vector<Eigen::Index>> FoldPlan::fold_indices() const {
  std::vector<std::vector<Eigen::Index>> out(static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    out[static_cast<std::size_t>(assignment[i])].push_back(
        static_cast<Eigen::Index>(i));
  }
  return out;
}

FoldPlan split_kfold(Eigen::Index n_samples, int k, std::uint64_t seed) {
  if (k < 2 || static_cast<Eigen::Index>(k) > n_samples) {
    std::ostringstream os;
    os << "k must lie in [2, n_samples]; got k=" << k << " with "
       << n_samples << " samples";
    throw ConfigError(os.str());
  }
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n_samples));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);

  FoldPlan plan;
  plan.k = k;
  plan.seed = seed;
  plan.assignment.assign(static_cast<std::size_t>(n_samples), 0);
  // The first (n mod k) folds take the extra sample.
  const Eigen::Index base = n_samples / k;
  const Eigen::Index extra = n_samples % k;
  std::size_t pos = 0;
  for (int f = 0; f < k; ++f) {
    const Eigen::Index len = base + (f < extra ? 1 : 0);
    for (Eigen::Index i = 0; i < len; ++i) {
      plan.assignment[static_cast<std::size_t>(order[pos++])] = f;
    }
  }
  plan.validate();
  return plan;
}

std::uint64_t mix_seed(std::uint64_t base, std::uint64_t salt) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// --- subset selection ------------------------------------------------------

std::string subset_method_name(SubsetMethod m) {
  switch (m) {
    case SubsetMethod::kExplicitList: return "explicit";
    case SubsetMethod::kGreedyCorrelation: return "greedy";
  }
  return "?";
}

SubsetMethod parse_subset_method(const std::string& name) {
  if (name == "explicit") return SubsetMethod::kExplicitList;
  if (name == "greedy") return SubsetMethod::kGreedyCorrelation;
  throw ConfigError("subset method: unknown value '" + name +
                    "' (expected explicit or greedy)");
}

Eigen::MatrixXd abs_correlation(const Eigen::MatrixXd& readings) {
  const Eigen::Index n = readings.cols();
  const Eigen::Index m = readings.rows();
  Eigen::MatrixXd centered =
      readings.rowwise() - readings.colwise().mean();
  Eigen::VectorXd norms(n);
  for (Eigen::Index c = 0; c < n; ++c) norms[c] = centered.col(c).norm();
  Eigen::MatrixXd corr = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    corr(a, a) = 1.0;
    for (Eigen::Index b = a + 1; b < n; ++b) {
      if (norms[a] > 0.0 && norms[b] > 0.0 && m > 1) {
        const double rho =
            centered.col(a).dot(centered.col(b)) / (norms[a] * norms[b]);
        corr(a, b) = corr(b, a) = std::min(std::abs(rho), 1.0);
      }
    }
  }
  return corr;
}

namespace {

SubsetSplit greedy_correlation_split(const Dataset& d, int n_fixed) {
  const Eigen::Index n = d.n_sensors();
  const Eigen::MatrixXd corr = abs_correlation(d.readings);

  std::vector<bool> in_fixed(static_cast<std::size_t>(n), false);
  // best_cover[u] = max |corr(f, u)| over currently fixed f.
  Eigen::VectorXd best_cover = Eigen::VectorXd::Zero(n);

  std::vector<Eigen::Index> picked;
  for (int round = 0; round < n_fixed; ++round) {
    Eigen::Index best = -1;
    double best_score = -std::numeric_limits<double>::infinity();
    for (Eigen::Index c = 0; c < n; ++c) {
      if (in_fixed[static_cast<std::size_t>(c)]) continue;
      // Weakest coverage over sensors left out if c joins the fixed set.
      double score = std::numeric_limits<double>::infinity();
      for (Eigen::Index u = 0; u < n; ++u) {
        if (u == c || in_fixed[static_cast<std::size_t>(u)]) continue;
        score = std::min(score, std::max(best_cover[u], corr(c, u)));
      }
      if (score > best_score) {
        best_score = score;
        best = c;
      }
    }
    in_fixed[static_cast<std::size_t>(best)] = true;
    picked.push_back(best);
    for (Eigen::Index u = 0; u < n; ++u) {
      best_cover[u] = std::max(best_cover[u], corr(best, u));
    }
  }

  SubsetSplit split;
  std::sort(picked.begin(), picked.end());
  for (Eigen::Index c : picked) {
    split.fixed_ids.push_back(d.sensor_ids[static_cast<std::size_t>(c)]);
  }
  for (Eigen::Index c = 0; c < n; ++c) {
    if (!in_fixed[static_cast<std::size_t>(c)]) {
      split.moved_ids.push_back(d.sensor_ids[static_cast<std::size_t>(c)]);
    }
  }
  return split;
}

}  // namespace

SubsetSplit select_subsets(const Dataset& d, int n_fixed, SubsetMethod method,
                           const std::vector<std::string>& explicit_fixed) {
  if (n_fixed < 1 || static_cast<Eigen::Index>(n_fixed) >= d.n_sensors()) {
    std::ostringstream os;
    os << "n_fixed must lie in [1, n_sensors); got " << n_fixed << " with "
       << d.n_sensors() << " sensors";
    throw ConfigError(os.str());
  }

  SubsetSplit split;
  if (method == SubsetMethod::kExplicitList) {
    if (static_cast<int>(explicit_fixed.size()) != n_fixed) {
      std::ostringstream os;
      os << "explicit fixed list has " << explicit_fixed.size()
         << " ids but n_fixed is " << n_fixed;
      throw ConfigError(os.str());
    }
    for (const auto& id : explicit_fixed) {
      d.sensor_index(id);  // throws for unknown ids
    }
    split.fixed_ids = explicit_fixed;
    std::set<std::string> fixed(explicit_fixed.begin(), explicit_fixed.end());
    for (const auto& id : d.sensor_ids) {
      if (!fixed.count(id)) split.moved_ids.push_back(id);
    }
  } else {
    split = greedy_correlation_split(d, n_fixed);
  }
  split.validate(d);
  return split;
}

// --- batch assembly --------------------------------------------------------

SampleBatch make_batch(const Dataset& d, const SubsetSplit& split,
                       const NormParams& np) {
  SampleBatch batch;
  batch.inputs = normalize(np, split.fixed_ids, d.columns_for(split.fixed_ids));
  batch.targets =
      normalize(np, split.moved_ids, d.columns_for(split.moved_ids));
  return batch;
}

SampleBatch make_batch(const Dataset& d, const SubsetSplit& split,
                       const NormParams& np,
                       const std::vector<Eigen::Index>& rows) {
  const Eigen::MatrixXd fixed = d.columns_for(split.fixed_ids);
  const Eigen::MatrixXd moved = d.columns_for(split.moved_ids);
  Eigen::MatrixXd fixed_rows(static_cast<Eigen::Index>(rows.size()),
                             fixed.cols());
  Eigen::MatrixXd moved_rows(static_cast<Eigen::Index>(rows.size()),
                             moved.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] < 0 || rows[i] >= d.n_samples()) {
      throw ShapeError("sample index out of range in batch row selection");
    }
    fixed_rows.row(static_cast<Eigen::Index>(i)) = fixed.row(rows[i]);
    moved_rows.row(static_cast<Eigen::Index>(i)) = moved.row(rows[i]);
  }
  SampleBatch batch;
  batch.inputs = normalize(np, split.fixed_ids, fixed_rows);
  batch.targets = normalize(np, split.moved_ids, moved_rows);
  return batch;
}

}  // namespace fieldcast
