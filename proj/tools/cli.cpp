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

#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "fieldcast/model_io.hpp"

namespace fieldcast::cli {
namespace {

namespace fs = std::filesystem;

const std::set<std::string> kCommonKeys = {"command", "out_dir", "timing"};

const std::set<std::string> kSynthKeys = {
    "seed",   "sensors",   "positions", "samples",           "dt",
    "t0",     "base",      "period",    "diurnal_amplitude", "basis",
    "noise_sd", "range_min", "range_max"};

const std::set<std::string> kDataKeys = {"data",      "missing", "range_min",
                                         "range_max", "fixed",   "n_fixed",
                                         "select",    "normalization"};

const std::set<std::string> kTrainKeys = {
    "layers", "activation", "method", "iterations", "switch_fraction",
    "grad_tolerance", "seed"};

const std::set<std::string> kEvaluateKeys = {"k", "threads", "format"};

const std::set<std::string> kCompareKeys = {
    "presets", "methods", "seeds", "k", "threads", "format",
    "layers",  // rejected below with a pointed message
};

const std::set<std::string> kPredictKeys = {"model", "inputs"};

std::set<std::string> allowed_keys(Command cmd) {
  std::set<std::string> keys = kCommonKeys;
  auto merge = [&keys](const std::set<std::string>& more) {
    keys.insert(more.begin(), more.end());
  };
  switch (cmd) {
    case Command::kSynth:
      merge(kSynthKeys);
      break;
    case Command::kTrain:
      merge(kDataKeys);
      merge(kTrainKeys);
      break;
    case Command::kEvaluate:
      merge(kDataKeys);
      merge(kTrainKeys);
      merge(kEvaluateKeys);
      break;
    case Command::kCompare:
      merge(kDataKeys);
      merge(kCompareKeys);
      merge({"activation", "iterations", "switch_fraction",
             "grad_tolerance"});
      break;
    case Command::kPredict:
      merge(kPredictKeys);
      break;
  }
  return keys;
}

std::string join(const std::vector<std::string>& parts, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out += sep;
    out += parts[i];
  }
  return out;
}

CsvLoadOptions load_options_from(const KeyValueConfig& c) {
  CsvLoadOptions o;
  o.missing = parse_missing_policy(c.get_string("missing", "drop-row"));
  o.valid_range.lo = c.get_double("range_min", o.valid_range.lo);
  o.valid_range.hi = c.get_double("range_max", o.valid_range.hi);
  if (!(o.valid_range.lo < o.valid_range.hi)) {
    throw ConfigError("key 'range_min': must be below range_max");
  }
  return o;
}

TrainConfig train_config_from(const KeyValueConfig& c) {
  TrainConfig t;
  t.method = parse_method(c.get_string("method", "hybrid"));
  t.total_iterations = static_cast<int>(c.get_int("iterations", 1000));
  t.switch_fraction = c.get_double("switch_fraction", 0.1);
  t.grad_tolerance = c.get_double("grad_tolerance", 1e-10);
  t.seed = c.get_seed("seed", 0);
  t.validate();
  return t;
}

void resolve_subset_keys(const KeyValueConfig& c, RunConfig& rc) {
  rc.norm_strategy =
      parse_norm_strategy(c.get_string("normalization", "global"));
  const bool have_fixed = c.has("fixed") && !c.get_string("fixed").empty();
  if (have_fixed) {
    rc.fixed_ids = split_list(c.get_string("fixed"));
    if (rc.fixed_ids.empty()) {
      throw ConfigError("key 'fixed': empty sensor list");
    }
    if (c.has("select") && c.get_string("select") != "explicit") {
      throw ConfigError("key 'select': '" + c.get_string("select") +
                        "' conflicts with an explicit fixed list");
    }
    rc.select = SubsetMethod::kExplicitList;
    const auto n = static_cast<int>(rc.fixed_ids.size());
    if (c.has("n_fixed") && static_cast<int>(c.get_int("n_fixed")) != n) {
      std::ostringstream os;
      os << "key 'n_fixed': " << c.get_int("n_fixed")
         << " disagrees with the " << n << "-entry fixed list";
      throw ConfigError(os.str());
    }
    rc.n_fixed = n;
  } else {
    rc.select = parse_subset_method(c.get_string("select", "greedy"));
    if (rc.select == SubsetMethod::kExplicitList) {
      throw ConfigError("key 'fixed': required when select is explicit");
    }
    rc.n_fixed = static_cast<int>(c.get_int("n_fixed", 14));
    if (rc.n_fixed < 1) {
      throw ConfigError("key 'n_fixed': must be at least 1");
    }
  }
}

RunConfig resolve(const KeyValueConfig& c, Command cmd) {
  RunConfig rc;
  rc.command = cmd;

  const std::set<std::string> allowed = allowed_keys(cmd);
  for (const std::string& key : c.keys()) {
    if (!allowed.count(key)) {
      throw ConfigError("unknown key '" + key + "' for command '" +
                        command_name(cmd) + "'");
    }
  }
  if (cmd == Command::kCompare && c.has("layers")) {
    throw ConfigError("key 'layers': compare takes a 'presets' list instead");
  }

  rc.out_dir = c.get_string("out_dir", "");
  if (rc.out_dir.empty()) {
    throw ConfigError("missing required key 'out_dir'");
  }
  rc.timing = c.get_bool("timing", false);

  switch (cmd) {
    case Command::kSynth: {
      rc.field = field_config_from(c);
      rc.positions_explicit = c.has("positions") &&
                              !c.get_string("positions").empty();
      rc.field.validate();
      break;
    }
    case Command::kTrain: {
      rc.data_path = c.get_string("data");
      rc.load_opts = load_options_from(c);
      resolve_subset_keys(c, rc);
      rc.layers = c.get_string("layers", "14:11:9");
      rc.activation =
          parse_activation(c.get_string("activation", "tanh"));
      rc.train = train_config_from(c);
      break;
    }
    case Command::kEvaluate: {
      rc.data_path = c.get_string("data");
      rc.load_opts = load_options_from(c);
      resolve_subset_keys(c, rc);
      rc.layers = c.get_string("layers", "14:11:9");
      rc.activation =
          parse_activation(c.get_string("activation", "tanh"));
      rc.train = train_config_from(c);
      rc.k = static_cast<int>(c.get_int("k", 5));
      rc.threads = static_cast<int>(c.get_int("threads", 1));
      rc.format = c.get_string("format", "both");
      break;
    }
    case Command::kCompare: {
      rc.data_path = c.get_string("data");
      rc.load_opts = load_options_from(c);
      resolve_subset_keys(c, rc);
      rc.activation =
          parse_activation(c.get_string("activation", "tanh"));
      rc.train = train_config_from(c);
      rc.preset_names = split_list(
          c.get_string("presets", join(architecture_presets(), ",")));
      if (rc.preset_names.empty()) {
        throw ConfigError("key 'presets': empty list");
      }
      for (const auto& name : rc.preset_names) {
        parse_layer_sizes(name);  // throws with the bad entry named
      }
      for (const auto& m :
           split_list(c.get_string("methods", "rprop,bfgs,hybrid"))) {
        rc.methods.push_back(parse_method(m));
      }
      if (rc.methods.empty()) {
        throw ConfigError("key 'methods': empty list");
      }
      rc.seeds = parse_seed_list("seeds",
                                 c.get_string("seeds", "1,2,3,4,5"));
      rc.k = static_cast<int>(c.get_int("k", 5));
      rc.threads = static_cast<int>(c.get_int("threads", 1));
      rc.format = c.get_string("format", "both");
      break;
    }
    case Command::kPredict: {
      rc.model_path = c.get_string("model");
      rc.inputs_path = c.get_string("inputs");
      break;
    }
  }

  if (rc.format != "json" && rc.format != "csv" && rc.format != "both") {
    throw ConfigError("key 'format': expected json, csv or both, got '" +
                      rc.format + "'");
  }
  if (rc.k < 2) throw ConfigError("key 'k': must be >= 2");
  if (rc.threads < 1) throw ConfigError("key 'threads': must be >= 1");
  return rc;
}

void ensure_out_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw IoError("cannot create output directory '" + dir + "': " +
                  ec.message());
  }
}

void write_echo(const std::string& dir, Command cmd,
                const std::vector<std::pair<std::string, std::string>>& kv) {
  const std::string path = (fs::path(dir) / "config.echo").string();
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << "# resolved configuration; rerun with: fieldcast "
      << command_name(cmd) << " --config config.echo\n";
  out << "command = " << command_name(cmd) << '\n';
  for (const auto& [k, v] : kv) out << k << " = " << v << '\n';
  if (!out) throw IoError("write failed for '" + path + "'");
}

std::string bool_name(bool b) { return b ? "true" : "false"; }

std::string basis_to_string(const std::vector<BasisBump>& bumps) {
  std::vector<std::string> parts;
  for (const BasisBump& b : bumps) {
    parts.push_back(format_double(b.cx) + "," + format_double(b.cy) + "," +
                    format_double(b.length_scale) + "," +
                    format_double(b.weight) + "," +
                    format_double(b.period_s) + "," +
                    format_double(b.phase));
  }
  return join(parts, "; ");
}

std::string seeds_to_string(const std::vector<std::uint64_t>& seeds) {
  std::vector<std::string> parts;
  for (auto s : seeds) parts.push_back(std::to_string(s));
  return join(parts, ",");
}

// Keys every data-consuming command echoes: enough to rerun the exact
// experiment, with the selected subset pinned down explicitly.
void echo_data_keys(std::vector<std::pair<std::string, std::string>>& kv,
                    const RunConfig& rc, const SubsetSplit& split) {
  kv.emplace_back("data", rc.data_path);
  kv.emplace_back("missing", missing_policy_name(rc.load_opts.missing));
  kv.emplace_back("range_min", format_double(rc.load_opts.valid_range.lo));
  kv.emplace_back("range_max", format_double(rc.load_opts.valid_range.hi));
  kv.emplace_back("fixed", join(split.fixed_ids, ","));
  kv.emplace_back("n_fixed", std::to_string(split.fixed_ids.size()));
  kv.emplace_back("select", "explicit");
  kv.emplace_back("normalization", norm_strategy_name(rc.norm_strategy));
}

void echo_train_keys(std::vector<std::pair<std::string, std::string>>& kv,
                     const RunConfig& rc, const NetworkSpec& spec) {
  kv.emplace_back("layers", layer_sizes_name(spec.layer_sizes));
  kv.emplace_back("activation", activation_name(rc.activation));
  kv.emplace_back("method", method_name(rc.train.method));
  kv.emplace_back("iterations", std::to_string(rc.train.total_iterations));
  kv.emplace_back("switch_fraction",
                  format_double(rc.train.switch_fraction));
  kv.emplace_back("grad_tolerance", format_double(rc.train.grad_tolerance));
}

struct Experiment {
  Dataset data;
  SubsetSplit split;
  NetworkSpec spec;
};

NetworkSpec resolve_spec(const RunConfig& rc, const SubsetSplit& split) {
  const auto n_in = static_cast<int>(split.fixed_ids.size());
  const auto n_out = static_cast<int>(split.moved_ids.size());
  NetworkSpec spec;
  if (rc.layers == "auto") {
    spec.layer_sizes = {n_in, pyramid_hidden_size(n_in, n_out), n_out};
  } else {
    spec.layer_sizes = parse_layer_sizes(rc.layers);
  }
  spec.hidden_activation = rc.activation;
  spec.validate();
  if (spec.input_size() != n_in) {
    std::ostringstream os;
    os << "key 'layers': input layer is " << spec.input_size()
       << " but the fixed subset has " << n_in << " sensors";
    throw ConfigError(os.str());
  }
  if (spec.output_size() != n_out) {
    std::ostringstream os;
    os << "key 'layers': output layer is " << spec.output_size()
       << " but the moved subset has " << n_out << " sensors";
    throw ConfigError(os.str());
  }
  return spec;
}

SubsetSplit resolve_split(const RunConfig& rc, const Dataset& d) {
  if (rc.select == SubsetMethod::kExplicitList) {
    return select_subsets(d, rc.n_fixed, SubsetMethod::kExplicitList,
                          rc.fixed_ids);
  }
  return select_subsets(d, rc.n_fixed, SubsetMethod::kGreedyCorrelation);
}

Experiment prepare_experiment(const RunConfig& rc) {
  Experiment ex;
  ex.data = load_csv(rc.data_path, rc.load_opts);
  ex.split = resolve_split(rc, ex.data);
  ex.spec = resolve_spec(rc, ex.split);
  return ex;
}

int do_synth(const RunConfig& rc) {
  const Dataset d = gen_synthetic(rc.field);
  ensure_out_dir(rc.out_dir);
  const std::string csv_path = (fs::path(rc.out_dir) / "dataset.csv").string();
  write_dataset_csv(d, csv_path);

  std::vector<std::pair<std::string, std::string>> kv;
  kv.emplace_back("sensors", std::to_string(rc.field.n_sensors));
  if (rc.positions_explicit) {
    std::vector<std::string> parts;
    for (const auto& p : rc.field.positions) {
      parts.push_back(format_double(p[0]) + "," + format_double(p[1]));
    }
    kv.emplace_back("positions", join(parts, "; "));
  }
  kv.emplace_back("samples", std::to_string(rc.field.n_samples));
  kv.emplace_back("dt", format_double(rc.field.dt_s));
  kv.emplace_back("t0", std::to_string(rc.field.t0_s));
  kv.emplace_back("base", format_double(rc.field.base));
  kv.emplace_back("diurnal_amplitude",
                  format_double(rc.field.diurnal_amplitude));
  kv.emplace_back("period", format_double(rc.field.diurnal_period_s));
  kv.emplace_back("basis", basis_to_string(rc.field.bumps));
  kv.emplace_back("noise_sd", format_double(rc.field.noise_sd));
  kv.emplace_back("seed", std::to_string(rc.field.seed));
  kv.emplace_back("range_min", format_double(rc.field.valid_range.lo));
  kv.emplace_back("range_max", format_double(rc.field.valid_range.hi));
  kv.emplace_back("out_dir", rc.out_dir);
  kv.emplace_back("timing", bool_name(rc.timing));
  write_echo(rc.out_dir, rc.command, kv);

  std::cout << "dataset.csv: " << d.n_samples() << " samples x "
            << d.n_sensors() << " sensors\n";
  return kExitOk;
}

int do_train(const RunConfig& rc) {
  Experiment ex = prepare_experiment(rc);
  NetworkSpec spec = ex.spec;
  spec.init_seed = rc.train.seed;

  const NormParams np = fit_normalizer(ex.data, rc.norm_strategy);
  const SampleBatch batch = make_batch(ex.data, ex.split, np);
  const Network net = build_network(spec);
  const TrainTrace trace = train(net, batch, rc.train);

  Model model{trace.final_net, np, ex.split, ex.data.valid_range, ""};
  model.model_id = model_content_id(model);

  ensure_out_dir(rc.out_dir);
  save_model(model, (fs::path(rc.out_dir) / "model.json").string());
  write_trace_csv(trace, (fs::path(rc.out_dir) / "trace.csv").string(),
                  rc.timing);

  std::vector<std::pair<std::string, std::string>> kv;
  echo_data_keys(kv, rc, ex.split);
  echo_train_keys(kv, rc, spec);
  kv.emplace_back("seed", std::to_string(rc.train.seed));
  kv.emplace_back("out_dir", rc.out_dir);
  kv.emplace_back("timing", bool_name(rc.timing));
  write_echo(rc.out_dir, rc.command, kv);

  int n_rprop = 0;
  int n_bfgs = 0;
  for (const auto& r : trace.records) {
    if (r.label == StepLabel::kRprop) ++n_rprop;
    if (r.label == StepLabel::kBfgs) ++n_bfgs;
  }
  std::cout << "trained " << layer_sizes_name(spec.layer_sizes) << ": SSE "
            << trace.records.front().sse << " -> "
            << trace.records.back().sse << " over " << n_rprop << " rprop + "
            << n_bfgs << " bfgs iterations, " << trace.total_seconds
            << " s\n";
  if (trace.early_stopped) {
    std::cout << "stopped early: gradient below "
              << rc.train.grad_tolerance << '\n';
  }
  std::cout << "model.json: id " << model.model_id << '\n';
  return kExitOk;
}

int do_evaluate(const RunConfig& rc) {
  Experiment ex = prepare_experiment(rc);

  CvConfig cv;
  cv.k = rc.k;
  cv.seed = rc.train.seed;
  cv.n_threads = rc.threads;
  cv.norm_strategy = rc.norm_strategy;
  const CvReport report =
      cross_validate(ex.data, ex.split, ex.spec, rc.train, cv);

  ensure_out_dir(rc.out_dir);
  if (rc.format != "csv") {
    write_cv_report_json(report,
                         (fs::path(rc.out_dir) / "report.json").string(),
                         rc.timing);
  }
  if (rc.format != "json") {
    write_cv_report_csv(report,
                        (fs::path(rc.out_dir) / "report.csv").string(),
                        rc.timing);
  }

  std::vector<std::pair<std::string, std::string>> kv;
  echo_data_keys(kv, rc, ex.split);
  echo_train_keys(kv, rc, ex.spec);
  kv.emplace_back("seed", std::to_string(rc.train.seed));
  kv.emplace_back("k", std::to_string(rc.k));
  kv.emplace_back("threads", std::to_string(rc.threads));
  kv.emplace_back("format", rc.format);
  kv.emplace_back("out_dir", rc.out_dir);
  kv.emplace_back("timing", bool_name(rc.timing));
  write_echo(rc.out_dir, rc.command, kv);

  std::cout << "test abs error " << report.mean_abs_error << " +/- "
            << report.sd_abs_error << " C over " << rc.k << " folds, "
            << report.total_wall_s << " s\n";
  return kExitOk;
}

int do_compare(const RunConfig& rc) {
  // The presets carry the architectures; every one is checked against the
  // split inside the grid, so no single spec is resolved here.
  const Dataset data = load_csv(rc.data_path, rc.load_opts);
  const SubsetSplit split = resolve_split(rc, data);

  std::vector<std::pair<std::string, NetworkSpec>> presets;
  for (const auto& name : rc.preset_names) {
    NetworkSpec spec;
    spec.layer_sizes = parse_layer_sizes(name);
    spec.hidden_activation = rc.activation;
    spec.validate();
    presets.emplace_back(name, spec);
  }

  CvConfig cv;
  cv.k = rc.k;
  cv.n_threads = rc.threads;
  cv.norm_strategy = rc.norm_strategy;
  const CompareReport report =
      compare_methods(data, split, presets, rc.methods, rc.train, cv,
                      rc.seeds);

  ensure_out_dir(rc.out_dir);
  if (rc.format != "csv") {
    write_compare_report_json(
        report, (fs::path(rc.out_dir) / "report.json").string(), rc.timing);
  }
  if (rc.format != "json") {
    write_compare_report_csv(
        report, (fs::path(rc.out_dir) / "report.csv").string(), rc.timing);
  }

  std::vector<std::pair<std::string, std::string>> kv;
  echo_data_keys(kv, rc, split);
  std::vector<std::string> method_names;
  for (Method m : rc.methods) method_names.push_back(method_name(m));
  kv.emplace_back("presets", join(rc.preset_names, ","));
  kv.emplace_back("methods", join(method_names, ","));
  kv.emplace_back("seeds", seeds_to_string(rc.seeds));
  kv.emplace_back("activation", activation_name(rc.activation));
  kv.emplace_back("iterations", std::to_string(rc.train.total_iterations));
  kv.emplace_back("switch_fraction",
                  format_double(rc.train.switch_fraction));
  kv.emplace_back("grad_tolerance", format_double(rc.train.grad_tolerance));
  kv.emplace_back("k", std::to_string(rc.k));
  kv.emplace_back("threads", std::to_string(rc.threads));
  kv.emplace_back("format", rc.format);
  kv.emplace_back("out_dir", rc.out_dir);
  kv.emplace_back("timing", bool_name(rc.timing));
  write_echo(rc.out_dir, rc.command, kv);

  for (const CompareCell& cell : report.cells) {
    std::cout << method_name(cell.method) << ' ' << cell.preset_name
              << ": mean " << cell.mean_abs_error << " median "
              << cell.median_abs_error << " sd " << cell.sd_abs_error
              << " C\n";
  }
  return kExitOk;
}

int do_predict(const RunConfig& rc) {
  const Model model = load_model(rc.model_path);
  const ReadingsTable table = load_readings_csv(rc.inputs_path);
  if (table.column_ids != model.split.fixed_ids) {
    throw DataError(rc.inputs_path + ": columns must be exactly the model's "
                    "fixed subset, in order: timestamp," +
                    join(model.split.fixed_ids, ","));
  }
  const Reconstruction rec =
      reconstruct(model, table.timestamps, table.values);

  ensure_out_dir(rc.out_dir);
  write_reconstruction_csv(
      rec, (fs::path(rc.out_dir) / "prediction.csv").string());

  std::vector<std::pair<std::string, std::string>> kv;
  kv.emplace_back("model", rc.model_path);
  kv.emplace_back("inputs", rc.inputs_path);
  kv.emplace_back("out_dir", rc.out_dir);
  kv.emplace_back("timing", bool_name(rc.timing));
  write_echo(rc.out_dir, rc.command, kv);

  std::cout << "prediction.csv: " << rec.estimates.rows() << " rows x "
            << rec.estimates.cols() << " sensors (" << rec.clamped.size()
            << " clamped)\n";
  return kExitOk;
}

}  // namespace

std::string command_name(Command c) {
  switch (c) {
    case Command::kSynth: return "synth";
    case Command::kTrain: return "train";
    case Command::kEvaluate: return "evaluate";
    case Command::kCompare: return "compare";
    case Command::kPredict: return "predict";
  }
  return "?";
}

RunConfig validate_config(const std::string& config_file,
                          const std::map<std::string, std::string>& overrides,
                          Command cmd) {
  KeyValueConfig merged = config_file.empty()
                              ? KeyValueConfig{}
                              : KeyValueConfig::parse_file(config_file);
  for (const auto& [key, value] : overrides) merged.set(key, value);
  return resolve(merged, cmd);
}

int run(const std::vector<std::string>& args) {
  CLI::App app{
      "Reconstructs sensor readings at uncovered locations from the "
      "readings of a fixed sensor subset, via a dense network trained "
      "full-batch.",
      "fieldcast"};
  app.require_subcommand(1);
  app.footer(
      "Config files are `key = value` lines; flags override file values.\n"
      "Exit status: 0 success, 1 usage, 2 configuration, 3 file I/O,\n"
      "4 data or shape, 5 training failure.");

  std::map<std::string, std::string> ov;
  std::string config_path;

  auto opt = [&ov](CLI::App* sub, const std::string& flag,
                   const std::string& key, const std::string& desc) {
    sub->add_option_function<std::string>(
        flag, [&ov, key](const std::string& v) { ov[key] = v; }, desc);
  };

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path,
                    "key = value config file; flags win over file entries");
    opt(sub, "--out-dir", "out_dir", "directory for all output files");
    sub->add_flag_callback(
        "--timing", [&ov] { ov["timing"] = "true"; },
        "write measured wall times into output files (reruns then differ)");
  };

  auto data_opts = [&](CLI::App* sub) {
    opt(sub, "--data", "data", "dataset CSV (timestamp column + sensors)");
    opt(sub, "--missing", "missing",
        "rows with unparsable cells: drop-row or fail");
    opt(sub, "--range-min", "range_min", "lowest valid reading, Celsius");
    opt(sub, "--range-max", "range_max", "highest valid reading, Celsius");
    opt(sub, "--fixed", "fixed",
        "comma list of sensor ids kept as network inputs");
    opt(sub, "--n-fixed", "n_fixed",
        "fixed-subset size for greedy selection (default 14)");
    opt(sub, "--select", "select", "subset choice: greedy or explicit");
    opt(sub, "--norm", "normalization",
        "normalization: global or per-sensor");
  };

  auto train_opts = [&](CLI::App* sub) {
    opt(sub, "--layers", "layers",
        "layer sizes like 14:11:9, or auto for one pyramid hidden layer");
    opt(sub, "--activation", "activation",
        "hidden activation: tanh or logistic");
    opt(sub, "--method", "method", "rprop, bfgs or hybrid");
    opt(sub, "--iterations", "iterations",
        "total training iterations (default 1000)");
    opt(sub, "--switch-fraction", "switch_fraction",
        "hybrid: fraction run as rprop first (default 0.1)");
    opt(sub, "--grad-tolerance", "grad_tolerance",
        "stop once the gradient max-norm drops below this");
    opt(sub, "--seed", "seed", "seed for weight init / fold split");
  };

  CLI::App* synth =
      app.add_subcommand("synth", "Generate a synthetic sensor-field CSV");
  common(synth);
  opt(synth, "--sensors", "sensors", "sensor count");
  opt(synth, "--samples", "samples", "sample count");
  opt(synth, "--noise-sd", "noise_sd", "Gaussian noise level, Celsius");
  opt(synth, "--seed", "seed", "field seed (positions and noise)");

  CLI::App* train_cmd = app.add_subcommand(
      "train", "Train one network on a full dataset; write model + trace");
  common(train_cmd);
  data_opts(train_cmd);
  train_opts(train_cmd);

  CLI::App* evaluate = app.add_subcommand(
      "evaluate", "k-fold cross-validated error report for one setup");
  common(evaluate);
  data_opts(evaluate);
  train_opts(evaluate);
  opt(evaluate, "--k", "k", "fold count (default 5)");
  opt(evaluate, "--threads", "threads", "folds trained in parallel");
  opt(evaluate, "--format", "format", "report files: json, csv or both");

  CLI::App* compare = app.add_subcommand(
      "compare", "Method x architecture grid of cross-validated errors");
  common(compare);
  data_opts(compare);
  opt(compare, "--presets", "presets",
      "comma list of architectures (default the three bundled presets)");
  opt(compare, "--methods", "methods",
      "comma list of rprop, bfgs, hybrid (default all three)");
  opt(compare, "--seeds", "seeds",
      "comma list of experiment seeds (default 1,2,3,4,5)");
  opt(compare, "--activation", "activation",
      "hidden activation: tanh or logistic");
  opt(compare, "--iterations", "iterations", "iterations per training run");
  opt(compare, "--switch-fraction", "switch_fraction",
      "hybrid: fraction run as rprop first");
  opt(compare, "--grad-tolerance", "grad_tolerance",
      "stop once the gradient max-norm drops below this");
  opt(compare, "--k", "k", "fold count (default 5)");
  opt(compare, "--threads", "threads", "folds trained in parallel");
  opt(compare, "--format", "format", "report files: json, csv or both");

  CLI::App* predict = app.add_subcommand(
      "predict", "Reconstruct moved-sensor readings from a saved model");
  common(predict);
  opt(predict, "--model", "model", "model.json written by train");
  opt(predict, "--inputs", "inputs",
      "CSV of fixed-sensor readings (timestamp + the model's fixed ids)");

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("fieldcast");
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  Command cmd = Command::kSynth;
  if (train_cmd->parsed()) cmd = Command::kTrain;
  if (evaluate->parsed()) cmd = Command::kEvaluate;
  if (compare->parsed()) cmd = Command::kCompare;
  if (predict->parsed()) cmd = Command::kPredict;

  try {
    const RunConfig rc = validate_config(config_path, ov, cmd);
    switch (cmd) {
      case Command::kSynth: return do_synth(rc);
      case Command::kTrain: return do_train(rc);
      case Command::kEvaluate: return do_evaluate(rc);
      case Command::kCompare: return do_compare(rc);
      case Command::kPredict: return do_predict(rc);
    }
    return kExitOk;
  } catch (const ConfigError& e) {
    std::cerr << "fieldcast: " << e.what() << '\n';
    return kExitConfig;
  } catch (const IoError& e) {
    std::cerr << "fieldcast: " << e.what() << '\n';
    return kExitIo;
  } catch (const ShapeError& e) {
    std::cerr << "fieldcast: " << e.what() << '\n';
    return kExitData;
  } catch (const DataError& e) {
    std::cerr << "fieldcast: " << e.what() << '\n';
    return kExitData;
  } catch (const TrainError& e) {
    std::cerr << "fieldcast: " << e.what() << '\n';
    return kExitTrain;
  } catch (const std::exception& e) {
    std::cerr << "fieldcast: internal error: " << e.what() << '\n';
    return kExitTrain;
  }
}

}  // namespace fieldcast::cli
