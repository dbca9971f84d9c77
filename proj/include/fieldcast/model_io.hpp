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

#ifndef FIELDCAST_MODEL_IO_HPP
#define FIELDCAST_MODEL_IO_HPP

#include <string>

#include "fieldcast/evaluation.hpp"
#include "fieldcast/optimizers.hpp"

namespace fieldcast {

/// Deterministic content hash (FNV-1a over the spec and flat parameters),
/// rendered as 16 hex digits. Two models hash equal iff saved bytes match.
std::string model_content_id(const Model& m);

/// Writes the model as a versioned JSON document. The stored model_id is
/// m.model_id when set, otherwise the content hash.
void save_model(const Model& m, const std::string& path);

/// Reads a model written by save_model; rejects unknown formats/versions.
Model load_model(const std::string& path);

// Report and trace writers. Timing columns are written as 0 unless
// include_timing is set, so byte-identical reruns stay byte-identical;
// the in-memory structs always carry the measured times.

void write_trace_csv(const TrainTrace& trace, const std::string& path,
                     bool include_timing = false);

void write_cv_report_json(const CvReport& report, const std::string& path,
                          bool include_timing = false);
void write_cv_report_csv(const CvReport& report, const std::string& path,
                         bool include_timing = false);

void write_compare_report_json(const CompareReport& report,
                               const std::string& path,
                               bool include_timing = false);
void write_compare_report_csv(const CompareReport& report,
                              const std::string& path,
                              bool include_timing = false);

void write_reconstruction_csv(const Reconstruction& rec,
                              const std::string& path);

}  // namespace fieldcast

#endif  // FIELDCAST_MODEL_IO_HPP
