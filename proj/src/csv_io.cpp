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

#include "fieldcast/csv_io.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fieldcast {
namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0;
  std::size_t b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::optional<std::int64_t> parse_epoch(const std::string& s) {
  if (s.empty()) return std::nullopt;
  char* end = nullptr;
  errno = 0;
  const long long v = std::strtoll(s.c_str(), &end, 10);
  if (errno != 0 || end != s.c_str() + s.size()) return std::nullopt;
  return static_cast<std::int64_t>(v);
}

std::optional<std::int64_t> parse_iso8601(const std::string& s) {
  std::string body = s;
  if (!body.empty() && (body.back() == 'Z' || body.back() == 'z')) {
    body.pop_back();
  }
  std::tm tm{};
  std::istringstream is(body);
  is >> std::get_time(&tm, "%Y-%m-%dT%H:%M:%S");
  if (is.fail() || is.peek() != EOF) return std::nullopt;
  return static_cast<std::int64_t>(timegm(&tm));
}

std::optional<std::int64_t> parse_timestamp(const std::string& s) {
  if (auto v = parse_epoch(s)) return v;
  return parse_iso8601(s);
}

std::optional<double> parse_value(const std::string& s) {
  if (s.empty()) return std::nullopt;
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(s.c_str(), &end);
  if (errno == ERANGE || end != s.c_str() + s.size()) return std::nullopt;
  if (!std::isfinite(v)) return std::nullopt;
  return v;
}

struct RawTable {
  std::vector<std::string> column_ids;
  std::vector<std::int64_t> timestamps;
  std::vector<std::vector<double>> rows;
  int dropped = 0;
};

// Shared reader. `range` turns on the always-fatal range check; `missing`
// decides what happens to rows that do not parse.
RawTable read_table(const std::string& path, MissingPolicy missing,
                    const ValueRange* range) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");

  std::string line;
  if (!std::getline(in, line)) throw DataError(path + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();

  RawTable table;
  std::vector<std::string> header = split_csv_line(line);
  if (header.empty() || header[0] != "timestamp") {
    throw DataError(path + ": malformed header: first column must be "
                    "'timestamp'");
  }
  for (std::size_t i = 1; i < header.size(); ++i) {
    if (header[i].empty()) {
      std::ostringstream os;
      os << path << ": malformed header: column " << i + 1 << " has no name";
      throw DataError(os.str());
    }
    table.column_ids.push_back(header[i]);
  }
  const std::size_t width = header.size();

  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;

    const std::vector<std::string> cells = split_csv_line(line);
    std::string problem;
    std::vector<double> row;
    std::int64_t ts = 0;

    if (cells.size() != width) {
      std::ostringstream os;
      os << "expected " << width << " cells, found " << cells.size();
      problem = os.str();
    } else if (auto t = parse_timestamp(cells[0]); !t) {
      problem = "unparsable timestamp '" + cells[0] + "'";
    } else {
      ts = *t;
      row.reserve(width - 1);
      for (std::size_t c = 1; c < width && problem.empty(); ++c) {
        if (auto v = parse_value(cells[c])) {
          row.push_back(*v);
        } else {
          problem = "unparsable value '" + cells[c] + "' in column '" +
                    table.column_ids[c - 1] + "'";
        }
      }
    }

    if (!problem.empty()) {
      if (missing == MissingPolicy::kFail) {
        std::ostringstream os;
        os << path << " line " << line_no << ": " << problem;
        throw DataError(os.str());
      }
      ++table.dropped;
      continue;
    }

    if (range != nullptr) {
      for (std::size_t c = 0; c < row.size(); ++c) {
        if (!range->contains(row[c])) {
          std::ostringstream os;
          os << path << " line " << line_no << ": reading " << row[c]
             << " in column '" << table.column_ids[c] << "' outside valid "
             << "range [" << range->lo << ", " << range->hi << "]";
          throw DataError(os.str());
        }
      }
    }

    table.timestamps.push_back(ts);
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace

std::string missing_policy_name(MissingPolicy p) {
  switch (p) {
    case MissingPolicy::kDropRow: return "drop-row";
    case MissingPolicy::kFail: return "fail";
  }
  return "?";
}

MissingPolicy parse_missing_policy(const std::string& name) {
  if (name == "drop-row") return MissingPolicy::kDropRow;
  if (name == "fail") return MissingPolicy::kFail;
  throw ConfigError("missing policy: unknown value '" + name +
                    "' (expected drop-row or fail)");
}

Dataset load_csv(const std::string& path, const CsvLoadOptions& opts) {
  RawTable table = read_table(path, opts.missing, &opts.valid_range);

  const auto n_sensors = static_cast<Eigen::Index>(table.column_ids.size());
  if (n_sensors < opts.min_sensors) {
    std::ostringstream os;
    os << path << ": " << n_sensors << " sensor column"
       << (n_sensors == 1 ? "" : "s") << "; at least " << opts.min_sensors
       << " required";
    throw DataError(os.str());
  }
  const auto n_samples = static_cast<Eigen::Index>(table.rows.size());
  if (n_samples < opts.min_samples) {
    std::ostringstream os;
    os << path << ": " << n_samples << " usable sample"
       << (n_samples == 1 ? "" : "s");
    if (table.dropped > 0) os << " after dropping " << table.dropped;
    os << "; at least " << opts.min_samples << " required";
    throw DataError(os.str());
  }

  Dataset d;
  d.sensor_ids = std::move(table.column_ids);
  d.timestamps = std::move(table.timestamps);
  d.valid_range = opts.valid_range;
  d.dropped_rows = table.dropped;
  d.readings.resize(n_samples, n_sensors);
  for (Eigen::Index r = 0; r < n_samples; ++r) {
    for (Eigen::Index c = 0; c < n_sensors; ++c) {
      d.readings(r, c) =
          table.rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
    }
  }
  d.validate();
  return d;
}

void write_dataset_csv(const Dataset& d, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << "timestamp";
  for (const auto& id : d.sensor_ids) out << ',' << id;
  out << '\n';
  for (Eigen::Index r = 0; r < d.n_samples(); ++r) {
    out << d.timestamps[static_cast<std::size_t>(r)];
    for (Eigen::Index c = 0; c < d.n_sensors(); ++c) {
      out << ',' << format_double(d.readings(r, c));
    }
    out << '\n';
  }
  if (!out) throw IoError("write failed for '" + path + "'");
}

ReadingsTable load_readings_csv(const std::string& path) {
  RawTable table = read_table(path, MissingPolicy::kFail, nullptr);
  if (table.rows.empty()) throw DataError(path + ": no data rows");

  ReadingsTable out;
  out.column_ids = std::move(table.column_ids);
  out.timestamps = std::move(table.timestamps);
  out.values.resize(static_cast<Eigen::Index>(table.rows.size()),
                    static_cast<Eigen::Index>(out.column_ids.size()));
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    for (std::size_t c = 0; c < table.rows[r].size(); ++c) {
      out.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          table.rows[r][c];
    }
  }
  return out;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace fieldcast
