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

#ifndef FIELDCAST_CSV_IO_HPP
#define FIELDCAST_CSV_IO_HPP

#include <string>

#include "fieldcast/dataset.hpp"

namespace fieldcast {

/// What to do with a row whose cells cannot all be parsed as numbers.
enum class MissingPolicy {
  kDropRow,  // skip the row, count it in Dataset::dropped_rows
  kFail,     // raise DataError naming the first bad cell
};

std::string missing_policy_name(MissingPolicy p);
MissingPolicy parse_missing_policy(const std::string& name);

struct CsvLoadOptions {
  MissingPolicy missing = MissingPolicy::kDropRow;
  ValueRange valid_range;
  // Floor on usable data; a file below either bound is rejected.
  Eigen::Index min_sensors = 2;
  Eigen::Index min_samples = 10;
};

/// Reads a dataset CSV: header `timestamp,<id>,<id>,...`, one sample per
/// row. Timestamps are integer epoch seconds or ISO-8601
/// (YYYY-MM-DDTHH:MM:SS, optional trailing Z), readings plain decimals.
/// Unparsable cells follow opts.missing; parsed values outside
/// opts.valid_range are always an error naming the cell.
Dataset load_csv(const std::string& path, const CsvLoadOptions& opts = {});

/// Writes a dataset in the load_csv format. Readings use %.17g so a
/// write/load round trip preserves every double bit-exactly.
void write_dataset_csv(const Dataset& d, const std::string& path);

/// Reads a readings table with arbitrary sensor columns (same format as a
/// dataset CSV) without range or minimum-size checks; used for prediction
/// inputs, which are validated against the model's own range afterwards.
struct ReadingsTable {
  std::vector<std::string> column_ids;
  std::vector<std::int64_t> timestamps;
  Eigen::MatrixXd values;
};

ReadingsTable load_readings_csv(const std::string& path);

/// Formats a double with %.17g (shortest exact-round-trip is not needed;
/// 17 significant digits always round-trip).
std::string format_double(double v);

}  // namespace fieldcast

#endif  // FIELDCAST_CSV_IO_HPP
