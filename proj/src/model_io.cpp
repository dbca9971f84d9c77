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

#include "fieldcast/model_io.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "fieldcast/csv_io.hpp"

namespace fieldcast {
namespace {

using nlohmann::json;

constexpr const char* kModelFormat = "fieldcast-model";
constexpr int kModelVersion = 1;

class Fnv1a {
public:
  void add_bytes(const void* data, std::size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
      hash_ ^= p[i];
      hash_ *= 0x100000001b3ULL;
    }
  }
  void add_u64(std::uint64_t v) { add_bytes(&v, sizeof v); }
  void add_double(double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    add_u64(bits);
  }
  std::uint64_t value() const { return hash_; }

private:
  std::uint64_t hash_ = 0xcbf29ce484222325ULL;
};

json vector_to_json(const Eigen::VectorXd& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

Eigen::VectorXd vector_from_json(const json& arr) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(arr.size()));
  Eigen::Index i = 0;
  for (const auto& x : arr) v[i++] = x.get<double>();
  return v;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << text;
  if (!out) throw IoError("write failed for '" + path + "'");
}

json load_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw DataError(path + ": " + e.what());
  }
}

json train_config_to_json(const TrainConfig& cfg) {
  return json{{"method", method_name(cfg.method)},
              {"iterations", cfg.total_iterations},
              {"switch_fraction", cfg.switch_fraction},
              {"seed", cfg.seed},
              {"grad_tolerance", cfg.grad_tolerance}};
}

json spec_to_json(const NetworkSpec& spec) {
  return json{{"layer_sizes", spec.layer_sizes},
              {"hidden_activation", activation_name(spec.hidden_activation)},
              {"init_seed", spec.init_seed}};
}

json split_to_json(const SubsetSplit& split) {
  return json{{"fixed_ids", split.fixed_ids}, {"moved_ids", split.moved_ids}};
}

}  // namespace

std::string model_content_id(const Model& m) {
  Fnv1a h;
  for (int s : m.net.spec().layer_sizes) {
    h.add_u64(static_cast<std::uint64_t>(s));
  }
  h.add_u64(m.net.spec().hidden_activation == Activation::kTanh ? 0 : 1);
  const Eigen::VectorXd params = flatten(m.net);
  for (Eigen::Index i = 0; i < params.size(); ++i) h.add_double(params[i]);
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << h.value();
  return os.str();
}

void save_model(const Model& m, const std::string& path) {
  m.validate();
  json doc;
  doc["format"] = kModelFormat;
  doc["version"] = kModelVersion;
  doc["model_id"] = m.model_id.empty() ? model_content_id(m) : m.model_id;
  doc["spec"] = spec_to_json(m.net.spec());
  doc["params"] = vector_to_json(flatten(m.net));
  doc["normalization"] = {{"strategy", norm_strategy_name(m.norm.strategy)},
                          {"sensor_ids", m.norm.sensor_ids},
                          {"offsets", vector_to_json(m.norm.offsets)},
                          {"scales", vector_to_json(m.norm.scales)}};
  doc["split"] = split_to_json(m.split);
  doc["valid_range"] = {{"lo", m.valid_range.lo}, {"hi", m.valid_range.hi}};
  write_text_file(path, doc.dump(2) + "\n");
}

Model load_model(const std::string& path) {
  const json doc = load_json_file(path);
  try {
    if (!doc.contains("format") ||
        doc.at("format").get<std::string>() != kModelFormat) {
      throw DataError(path + ": not a " + std::string(kModelFormat) +
                      " file");
    }
    if (doc.at("version").get<int>() != kModelVersion) {
      throw DataError(path + ": unsupported model version " +
                      doc.at("version").dump());
    }

    NetworkSpec spec;
    const json& jspec = doc.at("spec");
    spec.layer_sizes = jspec.at("layer_sizes").get<std::vector<int>>();
    spec.hidden_activation =
        parse_activation(jspec.at("hidden_activation").get<std::string>());
    spec.init_seed = jspec.at("init_seed").get<std::uint64_t>();
    spec.validate();

    Model m{unflatten(spec, vector_from_json(doc.at("params"))),
            NormParams{},
            SubsetSplit{},
            ValueRange{},
            doc.at("model_id").get<std::string>()};

    const json& jnorm = doc.at("normalization");
    m.norm.strategy =
        parse_norm_strategy(jnorm.at("strategy").get<std::string>());
    m.norm.sensor_ids =
        jnorm.at("sensor_ids").get<std::vector<std::string>>();
    m.norm.offsets = vector_from_json(jnorm.at("offsets"));
    m.norm.scales = vector_from_json(jnorm.at("scales"));

    m.split.fixed_ids =
        doc.at("split").at("fixed_ids").get<std::vector<std::string>>();
    m.split.moved_ids =
        doc.at("split").at("moved_ids").get<std::vector<std::string>>();

    m.valid_range.lo = doc.at("valid_range").at("lo").get<double>();
    m.valid_range.hi = doc.at("valid_range").at("hi").get<double>();

    m.validate();
    return m;
  } catch (const json::exception& e) {
    throw DataError(path + ": " + e.what());
  }
}

void write_trace_csv(const TrainTrace& trace, const std::string& path,
                     bool include_timing) {
  std::ostringstream os;
  os << "iteration,method,sse,elapsed_s\n";
  for (const TraceRecord& r : trace.records) {
    os << r.iteration << ',' << step_label_name(r.label) << ','
       << format_double(r.sse) << ','
       << format_double(include_timing ? r.elapsed_s : 0.0) << '\n';
  }
  write_text_file(path, os.str());
}

namespace {

json fold_to_json(const FoldRecord& f, bool include_timing) {
  return json{{"fold", f.fold},
              {"n_train", f.n_train},
              {"n_test", f.n_test},
              {"train_sse", f.train_sse},
              {"test_sse_c2", f.test_sse},
              {"test_abs_error_c", f.test_abs_error},
              {"wall_s", include_timing ? f.wall_s : 0.0}};
}

json cv_report_to_json(const CvReport& report, bool include_timing) {
  json folds = json::array();
  for (const FoldRecord& f : report.folds) {
    folds.push_back(fold_to_json(f, include_timing));
  }
  return json{
      {"folds", folds},
      {"mean_abs_error_c", report.mean_abs_error},
      {"sd_abs_error_c", report.sd_abs_error},
      {"total_wall_s", include_timing ? report.total_wall_s : 0.0},
      {"config",
       {{"spec", spec_to_json(report.spec)},
        {"split", split_to_json(report.split)},
        {"train", train_config_to_json(report.train_cfg)},
        // thread count deliberately left out: it cannot change the numbers,
        // and the report should not differ between serial and parallel runs
        {"k", report.cv_cfg.k},
        {"seed", report.cv_cfg.seed},
        {"normalization", norm_strategy_name(report.cv_cfg.norm_strategy)}}}};
}

}  // namespace

void write_cv_report_json(const CvReport& report, const std::string& path,
                          bool include_timing) {
  write_text_file(path, cv_report_to_json(report, include_timing).dump(2) +
                            "\n");
}

void write_cv_report_csv(const CvReport& report, const std::string& path,
                         bool include_timing) {
  std::ostringstream os;
  os << "fold,n_train,n_test,train_sse,test_sse_c2,test_abs_error_c,wall_s\n";
  for (const FoldRecord& f : report.folds) {
    os << f.fold << ',' << f.n_train << ',' << f.n_test << ','
       << format_double(f.train_sse) << ',' << format_double(f.test_sse)
       << ',' << format_double(f.test_abs_error) << ','
       << format_double(include_timing ? f.wall_s : 0.0) << '\n';
  }
  write_text_file(path, os.str());
}

void write_compare_report_json(const CompareReport& report,
                               const std::string& path, bool include_timing) {
  json cells = json::array();
  for (const CompareCell& c : report.cells) {
    json wall = json::array();
    for (double w : c.wall_s_per_seed) {
      wall.push_back(include_timing ? w : 0.0);
    }
    cells.push_back(
        {{"method", method_name(c.method)},
         {"architecture", c.preset_name},
         {"abs_error_per_seed_c", c.abs_error_per_seed},
         {"wall_s_per_seed", wall},
         {"mean_abs_error_c", c.mean_abs_error},
         {"median_abs_error_c", c.median_abs_error},
         {"sd_abs_error_c", c.sd_abs_error},
         {"mean_wall_s", include_timing ? c.mean_wall_s : 0.0}});
  }
  json doc{{"cells", cells},
           {"seeds", report.seeds},
           {"architectures", report.preset_names},
           {"k", report.cv_cfg.k},
           {"train", train_config_to_json(report.base_cfg)},
           {"split", split_to_json(report.split)},
           {"total_wall_s", include_timing ? report.total_wall_s : 0.0}};
  write_text_file(path, doc.dump(2) + "\n");
}

void write_compare_report_csv(const CompareReport& report,
                              const std::string& path, bool include_timing) {
  std::ostringstream os;
  os << "method,architecture,mean_abs_error_c,median_abs_error_c,"
        "sd_abs_error_c,mean_wall_s\n";
  for (const CompareCell& c : report.cells) {
    os << method_name(c.method) << ',' << c.preset_name << ','
       << format_double(c.mean_abs_error) << ','
       << format_double(c.median_abs_error) << ','
       << format_double(c.sd_abs_error) << ','
       << format_double(include_timing ? c.mean_wall_s : 0.0) << '\n';
  }
  write_text_file(path, os.str());
}

void write_reconstruction_csv(const Reconstruction& rec,
                              const std::string& path) {
  std::ostringstream os;
  os << "timestamp";
  for (const auto& id : rec.moved_ids) os << ',' << id;
  os << '\n';
  for (Eigen::Index r = 0; r < rec.estimates.rows(); ++r) {
    os << rec.timestamps[static_cast<std::size_t>(r)];
    for (Eigen::Index c = 0; c < rec.estimates.cols(); ++c) {
      os << ',' << format_double(rec.estimates(r, c));
    }
    os << '\n';
  }
  write_text_file(path, os.str());
}

}  // namespace fieldcast
