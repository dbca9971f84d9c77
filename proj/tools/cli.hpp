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

#ifndef FIELDCAST_TOOLS_CLI_HPP
#define FIELDCAST_TOOLS_CLI_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "fieldcast/config.hpp"
#include "fieldcast/csv_io.hpp"
#include "fieldcast/dataset.hpp"
#include "fieldcast/evaluation.hpp"
#include "fieldcast/optimizers.hpp"
#include "fieldcast/synthetic.hpp"

namespace fieldcast::cli {

enum class Command { kSynth, kTrain, kEvaluate, kCompare, kPredict };

std::string command_name(Command c);

// Exit statuses, documented in --help.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitIo = 3;
inline constexpr int kExitData = 4;
inline constexpr int kExitTrain = 5;

/// Fully resolved settings for one command, assembled from the config file
/// (when given), flag overrides, and defaults, in rising precedence.
struct RunConfig {
  Command command = Command::kSynth;

  std::string out_dir;
  bool timing = false;       // measured times in output files when true
  std::string format = "both";  // json | csv | both, for report commands

  // synth
  FieldConfig field;
  bool positions_explicit = false;  // were positions user-supplied?

  // data-consuming commands
  std::string data_path;
  CsvLoadOptions load_opts;
  std::vector<std::string> fixed_ids;  // resolved fixed subset when explicit
  int n_fixed = 14;
  SubsetMethod select = SubsetMethod::kGreedyCorrelation;
  NormStrategy norm_strategy = NormStrategy::kGlobalRange;

  // architecture
  std::string layers = "14:11:9";  // sizes "a:b:c" or "auto"
  Activation activation = Activation::kTanh;

  // training
  TrainConfig train;

  // evaluate / compare
  int k = 5;
  int threads = 1;
  std::vector<std::string> preset_names;
  std::vector<Method> methods;
  std::vector<std::uint64_t> seeds;

  // predict
  std::string model_path;
  std::string inputs_path;
};

/// Merges the config file (optional; empty path skips it) with flag
/// overrides and validates everything for `cmd`. Every diagnostic names the
/// offending key. Unknown keys in the file are rejected.
RunConfig validate_config(const std::string& config_file,
                          const std::map<std::string, std::string>& overrides,
                          Command cmd);

/// The whole program behind main(): parses args (without the program name),
/// dispatches the subcommand, maps failures onto the documented exit
/// statuses with a one-line diagnostic on stderr.
int run(const std::vector<std::string>& args);

}  // namespace fieldcast::cli

#endif  // FIELDCAST_TOOLS_CLI_HPP
