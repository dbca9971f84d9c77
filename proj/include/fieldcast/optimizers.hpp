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

#ifndef FIELDCAST_OPTIMIZERS_HPP
#define FIELDCAST_OPTIMIZERS_HPP

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "fieldcast/network.hpp"

namespace fieldcast {

// ---------------------------------------------------------------------------
// Rprop (iRprop- variant: on a gradient sign flip the step size shrinks, the
// parameter update is suppressed and the stored gradient is zeroed).
// ---------------------------------------------------------------------------

struct RpropConfig {
  double eta_minus = 0.6;   // step-size factor on sign flip
  double eta_plus = 1.2;    // step-size factor on persistent sign
  double delta0 = 0.1;      // initial per-parameter step size
  double delta_min = 1e-6;
  double delta_max = 50.0;

  void validate() const;  // eta_minus in (0,1), eta_plus > 1, 0 < min <= max
};

struct RpropState {
  Eigen::VectorXd step_sizes;  // always within [delta_min, delta_max]
  Eigen::VectorXd prev_grad;
  RpropConfig cfg;

  explicit RpropState(Eigen::Index n, RpropConfig cfg = {});
};

/// One full-batch Rprop update, in place. Throws TrainError on a non-finite
/// gradient component.
void rprop_step(RpropState& state, Eigen::VectorXd& params,
                const Eigen::VectorXd& grad);

// ---------------------------------------------------------------------------
// BFGS with a strong-Wolfe line search on the flat parameter vector.
// ---------------------------------------------------------------------------

/// Evaluates the objective and its gradient at one point.
using LossGradFn = std::function<LossGrad(const Eigen::VectorXd&)>;

struct BfgsConfig {
  double c1 = 1e-4;                // Armijo constant
  // Tight curvature constant: accepted steps sit near the 1-D minimizer, so
  // on quadratics the method inherits conjugate-direction termination rather
  // than merely superlinear drift. Costs a couple of extra evaluations per
  // line search and buys far fewer outer iterations.
  double c2 = 0.1;
  int max_line_search_evals = 25;  // trial evaluations before giving up
  double curvature_eps = 1e-10;    // update only when s'y > eps*|s||y|
  double fallback_step = 1e-3;     // gradient step length after a failure
};

struct BfgsState {
  Eigen::MatrixXd inv_hessian;  // symmetric positive-definite approximation
  Eigen::VectorXd prev_point;
  Eigen::VectorXd prev_grad;
  bool has_prev = false;
  BfgsConfig cfg;

  // Cached objective value and gradient at the current point, so successive
  // steps reuse what the line search already evaluated.
  double cur_loss = 0.0;
  Eigen::VectorXd cur_grad;
  bool has_cur = false;

  // False until the first curvature-accepted secant update; the identity is
  // rescaled to the secant's curvature at that point.
  bool first_update_done = false;

  explicit BfgsState(Eigen::Index n, BfgsConfig cfg = {});
  void seed_current(double loss, Eigen::VectorXd grad);
};

struct BfgsStepResult {
  double loss;         // objective at the new point
  double step_length;  // accepted alpha, or the fallback length
  int evals;           // objective evaluations consumed
  bool used_fallback;  // line search failed; took a small gradient step
};

/// One quasi-Newton step: direction -H*g, strong-Wolfe step length, then the
/// rank-two inverse-Hessian update guarded by the curvature condition. On a
/// failed line search the state resets to the identity and a gradient step of
/// cfg.fallback_step is taken instead. Throws TrainError on non-finite loss
/// or gradient at the current point.
BfgsStepResult bfgs_step(BfgsState& state, Eigen::VectorXd& params,
                         const LossGradFn& fn);

/// Convenience overload for separate loss and gradient callables.
BfgsStepResult bfgs_step(
    BfgsState& state, Eigen::VectorXd& params,
    const std::function<double(const Eigen::VectorXd&)>& loss_fn,
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& grad_fn);

// ---------------------------------------------------------------------------
// Full-batch training schedule.
// ---------------------------------------------------------------------------

enum class Method { kRprop, kBfgs, kHybrid };

std::string method_name(Method m);
Method parse_method(const std::string& name);

struct TrainConfig {
  Method method = Method::kHybrid;
  int total_iterations = 1000;
  double switch_fraction = 0.1;  // leading fraction run as Rprop (hybrid)
  std::uint64_t seed = 0;
  double grad_tolerance = 1e-10;  // infinity-norm early stop

  void validate() const;  // throws ConfigError naming the field
};

/// Number of leading Rprop iterations for a config: ceil(fraction * total)
/// for the hybrid method, evaluated with a small slack so decimal fractions
/// like 0.1 behave as written.
int rprop_iterations(const TrainConfig& cfg);

enum class StepLabel { kInit, kRprop, kBfgs };

std::string step_label_name(StepLabel label);

struct TraceRecord {
  int iteration;      // 0 is the initial-loss record
  StepLabel label;    // init for record 0, else rprop/bfgs
  double sse;         // objective after the step
  double elapsed_s;   // wall clock since training started
};

struct TrainTrace {
  std::vector<TraceRecord> records;
  Network final_net;
  double total_seconds = 0.0;
  bool early_stopped = false;
};

/// Trains a copy of `net` on `batch`: the leading rprop_iterations(cfg) steps
/// as Rprop, the remainder as BFGS. Stops early once the gradient
/// infinity-norm drops below cfg.grad_tolerance; the trace is then truncated
/// and flagged. Deterministic given the initial network, batch and config.
TrainTrace train(const Network& net, const SampleBatch& batch,
                 const TrainConfig& cfg);

}  // namespace fieldcast

#endif  // FIELDCAST_OPTIMIZERS_HPP
