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

// Release gate for the reconstruction pipeline. Each criterion prints one
// PASS/FAIL line; the process exits nonzero if any fail. Runtime budgets are
// part of the gate where stated.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cli.hpp"
#include "fieldcast/csv_io.hpp"
#include "fieldcast/dataset.hpp"
#include "fieldcast/evaluation.hpp"
#include "fieldcast/model_io.hpp"
#include "fieldcast/network.hpp"
#include "fieldcast/optimizers.hpp"
#include "fieldcast/synthetic.hpp"
#include "test_util.hpp"

using namespace fieldcast;

namespace {

// Returns an empty string on success, a description of the first failure
// otherwise.
using CriterionFn = std::function<std::string()>;

struct Criterion {
  std::string name;
  double time_limit_s;  // 0 means no budget
  CriterionFn fn;
};

// ---------------------------------------------------------------------
// 1. backprop vs central finite differences
// ---------------------------------------------------------------------

std::string check_gradients() {
  std::mt19937_64 rng(101);
  std::uniform_int_distribution<int> depth_pick(2, 4);
  std::uniform_int_distribution<int> rows_pick(1, 12);
  std::uniform_real_distribution<double> value(-1.5, 1.5);
  const double h = 1e-5;

  for (int trial = 0; trial < 50; ++trial) {
    NetworkSpec spec;
    const int depth = depth_pick(rng);
    for (int l = 0; l < depth; ++l) {
      const int cap = (l == 0) ? 6 : (l == depth - 1 ? 4 : 5);
      spec.layer_sizes.push_back(
          std::uniform_int_distribution<int>(1, cap)(rng));
    }
    spec.hidden_activation =
        (trial % 2 == 0) ? Activation::kTanh : Activation::kLogistic;
    spec.init_seed = rng();
    const Network net = build_network(spec);

    SampleBatch batch;
    const int rows = rows_pick(rng);
    batch.inputs.resize(rows, spec.layer_sizes.front());
    batch.targets.resize(rows, spec.layer_sizes.back());
    for (Eigen::Index i = 0; i < batch.inputs.size(); ++i) {
      batch.inputs.data()[i] = value(rng);
    }
    for (Eigen::Index i = 0; i < batch.targets.size(); ++i) {
      batch.targets.data()[i] = value(rng);
    }

    const Eigen::VectorXd analytic = gradient(net, batch);
    const Eigen::VectorXd theta = flatten(net);
    for (Eigen::Index i = 0; i < theta.size(); ++i) {
      Eigen::VectorXd hi = theta, lo = theta;
      hi[i] += h;
      lo[i] -= h;
      const double fd = (sse_loss(unflatten(spec, hi), batch) -
                         sse_loss(unflatten(spec, lo), batch)) /
                        (2.0 * h);
      const double tol = std::max(1e-8, 1e-6 * std::abs(fd));
      if (std::abs(analytic[i] - fd) > tol) {
        std::ostringstream os;
        os << "network " << trial << " ("
           << layer_sizes_name(spec.layer_sizes) << "), component " << i
           << ": analytic " << analytic[i] << " vs numeric " << fd;
        return os.str();
      }
    }
  }
  return {};
}

// ---------------------------------------------------------------------
// 2. BFGS against direct solves of SPD quadratics
// ---------------------------------------------------------------------

std::string check_bfgs_quadratics() {
  std::mt19937_64 rng(202);
  std::uniform_real_distribution<double> value(-1.0, 1.0);

  for (int trial = 0; trial < 20; ++trial) {
    const int dim = 2 + trial % 11;  // 2..12
    Eigen::MatrixXd m(dim, dim);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = value(rng);
    const Eigen::MatrixXd a =
        m.transpose() * m + 0.5 * Eigen::MatrixXd::Identity(dim, dim);
    Eigen::VectorXd b(dim);
    for (int i = 0; i < dim; ++i) b[i] = value(rng);

    const LossGradFn fn = [&a, &b](const Eigen::VectorXd& x) {
      LossGrad lg;
      lg.loss = 0.5 * x.dot(a * x) - b.dot(x);
      lg.grad = a * x - b;
      return lg;
    };
    const Eigen::VectorXd target = a.ldlt().solve(b);

    BfgsState state(dim);
    Eigen::VectorXd x(dim);
    for (int i = 0; i < dim; ++i) x[i] = 2.0 * value(rng);

    for (int it = 0; it < dim + 8; ++it) {
      bfgs_step(state, x, fn);
      if ((a * x - b).cwiseAbs().maxCoeff() < 1e-12) break;
    }
    const double err = (x - target).cwiseAbs().maxCoeff();
    if (!(err <= 1e-6)) {
      std::ostringstream os;
      os << "dimension " << dim << " quadratic " << trial
         << ": distance to direct solve " << err << " after " << dim + 8
         << " iterations";
      return os.str();
    }
  }
  return {};
}

// ---------------------------------------------------------------------
// 3. Rprop step-size mechanics over random gradient sequences
// ---------------------------------------------------------------------

std::string check_rprop_rules() {
  std::mt19937_64 rng(303);
  std::uniform_real_distribution<double> magnitude(0.1, 2.0);
  std::uniform_int_distribution<int> kind(0, 5);

  for (int seq = 0; seq < 10000; ++seq) {
    const int dim = 3;
    RpropState st(dim);
    Eigen::VectorXd w = Eigen::VectorXd::Zero(dim);
    Eigen::VectorXd delta = Eigen::VectorXd::Constant(dim, 0.1);
    Eigen::VectorXd prev = Eigen::VectorXd::Zero(dim);
    Eigen::VectorXd w_ref = w;

    for (int step = 0; step < 25; ++step) {
      Eigen::VectorXd g(dim);
      for (int i = 0; i < dim; ++i) {
        const int k = kind(rng);
        g[i] = (k == 0) ? 0.0 : (k % 2 ? magnitude(rng) : -magnitude(rng));
      }
      rprop_step(st, w, g);

      for (int i = 0; i < dim; ++i) {
        const double product = g[i] * prev[i];
        if (product > 0.0) {
          delta[i] = std::min(delta[i] * 1.2, 50.0);
          w_ref[i] -= (g[i] > 0 ? delta[i] : -delta[i]);
          prev[i] = g[i];
        } else if (product < 0.0) {
          delta[i] = std::max(delta[i] * 0.6, 1e-6);
          prev[i] = 0.0;  // suppressed update, fresh start next step
        } else {
          if (g[i] > 0.0) {
            w_ref[i] -= delta[i];
          } else if (g[i] < 0.0) {
            w_ref[i] += delta[i];
          }
          prev[i] = g[i];
        }

        if (st.step_sizes[i] != delta[i] || w[i] != w_ref[i] ||
            st.step_sizes[i] < 1e-6 || st.step_sizes[i] > 50.0) {
          std::ostringstream os;
          os << "sequence " << seq << " step " << step << " component " << i
             << ": step size " << st.step_sizes[i] << " (expected "
             << delta[i] << "), weight " << w[i] << " (expected " << w_ref[i]
             << ")";
          return os.str();
        }
      }
    }
  }
  return {};
}

// ---------------------------------------------------------------------
// shared reference experiment setup
// ---------------------------------------------------------------------

struct ReferenceExperiment {
  Dataset data;
  SubsetSplit split;
  NetworkSpec spec;

  ReferenceExperiment() : data(gen_synthetic(reference_field())) {
    split = select_subsets(data, 14, SubsetMethod::kGreedyCorrelation);
    spec.layer_sizes = {14, 11, 9};
    spec.hidden_activation = Activation::kTanh;
    spec.init_seed = 1;
  }
};

std::optional<ReferenceExperiment>& reference_experiment() {
  static std::optional<ReferenceExperiment> cache;
  if (!cache) cache.emplace();
  return cache;
}

// ---------------------------------------------------------------------
// 4. hybrid schedule: label layout and monotone quasi-Newton segment
// ---------------------------------------------------------------------

std::string check_hybrid_schedule() {
  const ReferenceExperiment& ref = *reference_experiment();
  const NormParams np = fit_normalizer(ref.data);
  const SampleBatch batch = make_batch(ref.data, ref.split, np);
  const Network net = build_network(ref.spec);

  TrainConfig cfg;
  cfg.method = Method::kHybrid;
  cfg.total_iterations = 1000;
  cfg.switch_fraction = 0.1;
  cfg.grad_tolerance = 0.0;  // the full schedule must play out
  const TrainTrace trace = train(net, batch, cfg);

  if (trace.records.size() != 1001) {
    return "expected 1001 trace records, got " +
           std::to_string(trace.records.size()) +
           (trace.early_stopped ? " (early stop)" : "");
  }
  for (int i = 1; i <= 1000; ++i) {
    const StepLabel want = (i <= 100) ? StepLabel::kRprop : StepLabel::kBfgs;
    if (trace.records[i].label != want) {
      return "iteration " + std::to_string(i) + " labeled '" +
             step_label_name(trace.records[i].label) + "'";
    }
  }
  for (int i = 102; i <= 1000; ++i) {
    const double before = trace.records[i - 1].sse;
    const double after = trace.records[i].sse;
    if (!(after <= before + 1e-12)) {
      std::ostringstream os;
      os << "SSE rose on the quasi-Newton segment at iteration " << i << ": "
         << before << " -> " << after;
      return os.str();
    }
  }
  return {};
}

// ---------------------------------------------------------------------
// 5. method ordering on the reference dataset
// ---------------------------------------------------------------------

std::string check_method_ordering() {
  const ReferenceExperiment& ref = *reference_experiment();

  std::vector<std::pair<std::string, NetworkSpec>> presets;
  presets.emplace_back("14:11:9", ref.spec);
  const std::vector<Method> methods = {Method::kRprop, Method::kBfgs,
                                       Method::kHybrid};
  const std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};

  TrainConfig base;
  base.method = Method::kHybrid;  // overwritten per cell
  base.total_iterations = 300;
  base.switch_fraction = 0.1;
  CvConfig cv;
  cv.k = 5;

  const CompareReport rep =
      compare_methods(ref.data, ref.split, presets, methods, base, cv, seeds);

  double med_rprop = 0, med_bfgs = 0, med_hybrid = 0;
  for (const CompareCell& cell : rep.cells) {
    if (cell.method == Method::kRprop) med_rprop = cell.median_abs_error;
    if (cell.method == Method::kBfgs) med_bfgs = cell.median_abs_error;
    if (cell.method == Method::kHybrid) med_hybrid = cell.median_abs_error;
  }

  std::ostringstream os;
  os.precision(4);
  os << "median abs error C: rprop " << med_rprop << ", bfgs " << med_bfgs
     << ", hybrid " << med_hybrid;
  if (!(med_hybrid <= med_rprop)) {
    return "hybrid did not beat rprop (" + os.str() + ")";
  }
  if (!(med_hybrid <= med_bfgs + 0.05)) {
    return "hybrid trailed bfgs by more than 0.05 C (" + os.str() + ")";
  }
  std::fprintf(stderr, "    [%s]\n", os.str().c_str());
  return {};
}

// ---------------------------------------------------------------------
// 6. reconstruction fidelity on the noiseless field
// ---------------------------------------------------------------------

std::string check_reconstruction_fidelity() {
  const ReferenceExperiment& ref = *reference_experiment();

  TrainConfig tc;
  tc.method = Method::kHybrid;
  tc.total_iterations = 500;
  tc.switch_fraction = 0.1;
  CvConfig cv;
  cv.k = 5;
  cv.seed = 42;

  const CvReport rep = cross_validate(ref.data, ref.split, ref.spec, tc, cv);
  double worst = 0.0;
  for (const FoldRecord& f : rep.folds) {
    worst = std::max(worst, f.test_abs_error);
  }
  std::ostringstream os;
  os.precision(4);
  os << "mean abs error " << rep.mean_abs_error << " C, worst fold " << worst
     << " C";
  if (!(worst <= 0.1)) {
    return "a fold exceeded 0.1 C (" + os.str() + ")";
  }
  std::fprintf(stderr, "    [%s]\n", os.str().c_str());
  return {};
}

// ---------------------------------------------------------------------
// 7. cross-validation protocol invariants
// ---------------------------------------------------------------------

bool reports_identical(const CvReport& a, const CvReport& b) {
  if (a.folds.size() != b.folds.size()) return false;
  for (std::size_t i = 0; i < a.folds.size(); ++i) {
    if (a.folds[i].n_train != b.folds[i].n_train) return false;
    if (a.folds[i].n_test != b.folds[i].n_test) return false;
    if (a.folds[i].train_sse != b.folds[i].train_sse) return false;
    if (a.folds[i].test_sse != b.folds[i].test_sse) return false;
    if (a.folds[i].test_abs_error != b.folds[i].test_abs_error) return false;
  }
  return a.mean_abs_error == b.mean_abs_error &&
         a.sd_abs_error == b.sd_abs_error;
}

std::string check_cv_protocol() {
  // fold partition invariants at k = 2, 5 and n
  const Eigen::Index n = 40;
  for (int k : {2, 5, 40}) {
    const FoldPlan plan = split_kfold(n, k, 9);
    const auto folds = plan.fold_indices();
    if (static_cast<int>(folds.size()) != k) {
      return "k=" + std::to_string(k) + ": wrong fold count";
    }
    std::set<Eigen::Index> seen;
    std::size_t largest = 0, smallest = static_cast<std::size_t>(n);
    for (const auto& fold : folds) {
      largest = std::max(largest, fold.size());
      smallest = std::min(smallest, fold.size());
      for (const Eigen::Index i : fold) {
        if (i < 0 || i >= n || !seen.insert(i).second) {
          return "k=" + std::to_string(k) + ": sample " + std::to_string(i) +
                 " misassigned";
        }
      }
    }
    if (seen.size() != static_cast<std::size_t>(n)) {
      return "k=" + std::to_string(k) + ": not every sample was tested";
    }
    if (largest - smallest > 1) {
      return "k=" + std::to_string(k) + ": fold sizes differ by more than 1";
    }
  }

  // seeded repeatability and thread-count independence of full reports
  FieldConfig field = reference_field();
  field.n_sensors = 6;
  field.positions.clear();
  field.n_samples = 40;
  field.noise_sd = 0.3;
  field.seed = 3;
  const Dataset d = gen_synthetic(field);
  const SubsetSplit split =
      select_subsets(d, 4, SubsetMethod::kGreedyCorrelation);
  NetworkSpec spec;
  spec.layer_sizes = {4, 3, 2};
  TrainConfig tc;
  tc.total_iterations = 10;
  CvConfig serial;
  serial.k = 5;
  serial.seed = 17;
  CvConfig parallel = serial;
  parallel.n_threads = 3;

  const CvReport r1 = cross_validate(d, split, spec, tc, serial);
  const CvReport r2 = cross_validate(d, split, spec, tc, serial);
  const CvReport r3 = cross_validate(d, split, spec, tc, parallel);
  if (!reports_identical(r1, r2)) {
    return "repeated seeded runs differ";
  }
  if (!reports_identical(r1, r3)) {
    return "serial and parallel runs differ";
  }

  // and the serialized reports are byte-identical too
  testutil::TempDir tmp("gate-cv");
  write_cv_report_json(r1, tmp.file("a.json"), false);
  write_cv_report_json(r3, tmp.file("b.json"), false);
  if (testutil::read_file(tmp.file("a.json")) !=
      testutil::read_file(tmp.file("b.json"))) {
    return "serialized reports differ between serial and parallel runs";
  }
  return {};
}

// ---------------------------------------------------------------------
// 8. end-to-end determinism through the command line
// ---------------------------------------------------------------------

std::string check_pipeline_determinism() {
  testutil::TempDir tmp("gate-e2e");
  // The commands run in-process and narrate to stdout; keep the gate's
  // one-line-per-criterion output clean.
  std::ostringstream sink;
  std::streambuf* saved = std::cout.rdbuf(sink.rdbuf());
  struct Restore {
    std::streambuf* buf;
    ~Restore() { std::cout.rdbuf(buf); }
  } restore{saved};

  for (const char* tag : {"a", "b"}) {
    const std::string root = tmp.file(tag);
    if (cli::run({"synth", "--out-dir", root + "/field", "--sensors", "6",
                  "--samples", "60", "--noise-sd", "0.3", "--seed", "3"}) !=
        0) {
      return "synth failed";
    }
    if (cli::run({"train", "--out-dir", root + "/trained", "--data",
                  root + "/field/dataset.csv", "--fixed", "s1,s2,s3,s4",
                  "--layers", "auto", "--iterations", "50", "--seed",
                  "7"}) != 0) {
      return "train failed";
    }
    // prediction inputs: the fixed columns of the generated dataset
    const Dataset d = load_csv(root + "/field/dataset.csv");
    Dataset fixed_only;
    fixed_only.sensor_ids = {"s1", "s2", "s3", "s4"};
    fixed_only.timestamps = d.timestamps;
    fixed_only.readings = d.columns_for(fixed_only.sensor_ids);
    fixed_only.valid_range = d.valid_range;
    write_dataset_csv(fixed_only, root + "/inputs.csv");
    if (cli::run({"predict", "--out-dir", root + "/pred", "--model",
                  root + "/trained/model.json", "--inputs",
                  root + "/inputs.csv"}) != 0) {
      return "predict failed";
    }
  }

  for (const char* name :
       {"field/dataset.csv", "trained/model.json", "trained/trace.csv",
        "pred/prediction.csv"}) {
    const std::string a = testutil::read_file(tmp.file(std::string("a/") + name));
    const std::string b = testutil::read_file(tmp.file(std::string("b/") + name));
    if (a.empty() || a != b) {
      return std::string(name) + " differs between identical runs";
    }
  }
  return {};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"backprop gradients match central finite differences", 10.0,
       check_gradients},
      {"BFGS solves random SPD quadratics to the direct answer", 5.0,
       check_bfgs_quadratics},
      {"Rprop step sizes follow the update rule and stay bounded", 5.0,
       check_rprop_rules},
      {"hybrid schedule: 100 rprop then 900 monotone bfgs iterations", 0.0,
       check_hybrid_schedule},
      {"median error ordering: hybrid <= rprop and <= bfgs + 0.05 C", 900.0,
       check_method_ordering},
      {"noiseless-field reconstruction within 0.1 C under 5-fold CV", 300.0,
       check_reconstruction_fidelity},
      {"fold partition invariants and repeatable reports", 0.0,
       check_cv_protocol},
      {"synth -> train -> predict twice is byte-identical", 0.0,
       check_pipeline_determinism},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    std::string detail;
    try {
      detail = criteria[i].fn();
    } catch (const std::exception& e) {
      detail = std::string("unexpected exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    if (detail.empty() && criteria[i].time_limit_s > 0.0 &&
        secs > criteria[i].time_limit_s) {
      std::ostringstream os;
      os.precision(3);
      os << "over the time budget: " << secs << " s > "
         << criteria[i].time_limit_s << " s";
      detail = os.str();
    }
    const bool pass = detail.empty();
    failures += pass ? 0 : 1;
    std::printf("criterion %zu: %s  %s  (%.1f s%s)\n", i + 1,
                pass ? "PASS" : "FAIL", criteria[i].name.c_str(), secs,
                criteria[i].time_limit_s > 0.0
                    ? (" / limit " + std::to_string(int(criteria[i].time_limit_s)) + " s").c_str()
                    : "");
    if (!pass) {
      std::printf("             %s\n", detail.c_str());
    }
    std::fflush(stdout);
  }

  if (failures == 0) {
    std::printf("all %zu criteria passed\n", criteria.size());
  } else {
    std::printf("%d of %zu criteria FAILED\n", failures, criteria.size());
  }
  return failures == 0 ? 0 : 1;
}
