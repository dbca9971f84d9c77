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

#include "fieldcast/optimizers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <utility>

namespace fieldcast {
namespace {

double sign_of(double v) { return v > 0 ? 1.0 : (v < 0 ? -1.0 : 0.0); }

// --- strong-Wolfe line search (bracket + zoom, cubic interpolation) --------

struct Trial {
  double alpha = 0.0;
  double f = std::numeric_limits<double>::infinity();
  double dphi = std::numeric_limits<double>::quiet_NaN();
  Eigen::VectorXd x;
  Eigen::VectorXd grad;
};

struct WolfeResult {
  bool ok = false;
  Trial accepted;
  int evals = 0;
};

// Minimizer of the cubic through (a, fa) with slope dfa at a, (b, fb) and
// (c, fc). Returns nullopt when the fit degenerates.
std::optional<double> cubic_min(double a, double fa, double dfa, double b,
                                double fb, double c, double fc) {
  const double db = b - a;
  const double dc = c - a;
  const double denom = (db * dc) * (db * dc) * (db - dc);
  if (denom == 0.0) return std::nullopt;
  const double rb = fb - fa - dfa * db;
  const double rc = fc - fa - dfa * dc;
  const double A = (dc * dc * rb - db * db * rc) / denom;
  const double B = (-dc * dc * dc * rb + db * db * db * rc) / denom;
  const double radical = B * B - 3.0 * A * dfa;
  if (!(radical >= 0.0) || A == 0.0) return std::nullopt;
  const double xmin = a + (-B + std::sqrt(radical)) / (3.0 * A);
  if (!std::isfinite(xmin)) return std::nullopt;
  return xmin;
}

// Minimizer of the quadratic through (a, fa) with slope dfa at a and (b, fb).
std::optional<double> quad_min(double a, double fa, double dfa, double b,
                               double fb) {
  const double db = b - a;
  if (db == 0.0) return std::nullopt;
  const double B = (fb - fa - dfa * db) / (db * db);
  if (B == 0.0 || !std::isfinite(B)) return std::nullopt;
  const double xmin = a - dfa / (2.0 * B);
  if (!std::isfinite(xmin)) return std::nullopt;
  return xmin;
}

class WolfeSearch {
public:
  WolfeSearch(const LossGradFn& fn, const Eigen::VectorXd& x0,
              const Eigen::VectorXd& d, double f0, double dphi0,
              const BfgsConfig& cfg)
      : fn_(fn), x0_(x0), d_(d), f0_(f0), dphi0_(dphi0), cfg_(cfg) {}

  WolfeResult run() {
    // Bracketing phase: expand from the unit trial step until the minimum is
    // bracketed or the strong conditions hold outright.
    double a_prev = 0.0;
    double f_prev = f0_;
    double dphi_prev = dphi0_;
    double alpha = 1.0;
    const double alpha_max = 1e10;

    for (int iter = 0; budget_left(); ++iter) {
      Trial t = eval(alpha);
      if (t.f > f0_ + cfg_.c1 * alpha * dphi0_ ||
          (iter > 0 && t.f >= f_prev) || !std::isfinite(t.dphi)) {
        return zoom(a_prev, f_prev, dphi_prev, t.alpha, t.f);
      }
      if (std::abs(t.dphi) <= -cfg_.c2 * dphi0_) {
        return accept(std::move(t));
      }
      if (t.dphi >= 0.0) {
        return zoom(t.alpha, t.f, t.dphi, a_prev, f_prev);
      }
      a_prev = t.alpha;
      f_prev = t.f;
      dphi_prev = t.dphi;
      alpha = std::min(2.0 * alpha, alpha_max);
      if (a_prev >= alpha_max) break;
    }
    return fail();
  }

private:
  bool budget_left() const { return evals_ < cfg_.max_line_search_evals; }

  Trial eval(double alpha) {
    Trial t;
    t.alpha = alpha;
    t.x = x0_ + alpha * d_;
    LossGrad lg = fn_(t.x);
    ++evals_;
    t.f = std::isfinite(lg.loss) ? lg.loss
                                 : std::numeric_limits<double>::infinity();
    t.grad = std::move(lg.grad);
    t.dphi = t.grad.allFinite() ? t.grad.dot(d_)
                                : std::numeric_limits<double>::quiet_NaN();
    return t;
  }

  WolfeResult accept(Trial t) { return {true, std::move(t), evals_}; }
  WolfeResult fail() { return {false, {}, evals_}; }

  // Sectioning phase between a_lo (lowest value seen, Armijo holds) and a_hi.
  WolfeResult zoom(double a_lo, double f_lo, double dphi_lo, double a_hi,
                   double f_hi) {
    double a_rec = 0.0;
    double f_rec = f0_;
    for (int iter = 0; budget_left(); ++iter) {
      const double dalpha = a_hi - a_lo;
      const double lo_end = std::min(a_lo, a_hi);
      const double hi_end = std::max(a_lo, a_hi);

      std::optional<double> aj;
      if (iter > 0) {
        aj = cubic_min(a_lo, f_lo, dphi_lo, a_hi, f_hi, a_rec, f_rec);
        const double chk = 0.2 * std::abs(dalpha);
        if (aj && (*aj > hi_end - chk || *aj < lo_end + chk)) aj.reset();
      }
      if (!aj) {
        aj = quad_min(a_lo, f_lo, dphi_lo, a_hi, f_hi);
        const double chk = 0.1 * std::abs(dalpha);
        if (aj && (*aj > hi_end - chk || *aj < lo_end + chk)) aj.reset();
      }
      const double alpha = aj ? *aj : a_lo + 0.5 * dalpha;

      Trial t = eval(alpha);
      if (t.f > f0_ + cfg_.c1 * alpha * dphi0_ || t.f >= f_lo ||
          !std::isfinite(t.dphi)) {
        a_rec = a_hi;
        f_rec = f_hi;
        a_hi = alpha;
        f_hi = t.f;
      } else {
        if (std::abs(t.dphi) <= -cfg_.c2 * dphi0_) {
          return accept(std::move(t));
        }
        if (t.dphi * dalpha >= 0.0) {
          a_rec = a_hi;
          f_rec = f_hi;
          a_hi = a_lo;
          f_hi = f_lo;
        } else {
          a_rec = a_lo;
          f_rec = f_lo;
        }
        a_lo = alpha;
        f_lo = t.f;
        dphi_lo = t.dphi;
      }
      if (std::abs(a_hi - a_lo) <=
          1e-14 * std::max(1.0, std::abs(a_lo))) {
        break;
      }
    }
    return fail();
  }

  const LossGradFn& fn_;
  const Eigen::VectorXd& x0_;
  const Eigen::VectorXd& d_;
  double f0_;
  double dphi0_;
  const BfgsConfig& cfg_;
  int evals_ = 0;
};

}  // namespace

// --- Rprop -----------------------------------------------------------------

void RpropConfig::validate() const {
  if (!(eta_minus > 0.0 && eta_minus < 1.0)) {
    throw ConfigError("eta_minus must lie in (0, 1)");
  }
  if (!(eta_plus > 1.0)) throw ConfigError("eta_plus must be > 1");
  if (!(delta_min > 0.0 && delta_min <= delta_max)) {
    throw ConfigError("delta bounds need 0 < delta_min <= delta_max");
  }
  if (!(delta0 >= delta_min && delta0 <= delta_max)) {
    throw ConfigError("delta0 must lie within [delta_min, delta_max]");
  }
}

RpropState::RpropState(Eigen::Index n, RpropConfig config)
    : step_sizes(Eigen::VectorXd::Constant(n, config.delta0)),
      prev_grad(Eigen::VectorXd::Zero(n)),
      cfg(config) {
  cfg.validate();
}

void rprop_step(RpropState& state, Eigen::VectorXd& params,
                const Eigen::VectorXd& grad) {
  if (params.size() != state.step_sizes.size() ||
      grad.size() != state.step_sizes.size()) {
    std::ostringstream os;
    os << "rprop: vector lengths disagree (params " << params.size()
       << ", grad " << grad.size() << ", state " << state.step_sizes.size()
       << ")";
    throw ShapeError(os.str());
  }
  const RpropConfig& cfg = state.cfg;
  for (Eigen::Index i = 0; i < params.size(); ++i) {
    const double g = grad[i];
    if (!std::isfinite(g)) {
      std::ostringstream os;
      os << "rprop: non-finite gradient component at index " << i;
      throw TrainError(os.str());
    }
    const double product = g * state.prev_grad[i];
    double& delta = state.step_sizes[i];
    if (product > 0.0) {
      delta = std::min(delta * cfg.eta_plus, cfg.delta_max);
      params[i] -= sign_of(g) * delta;
      state.prev_grad[i] = g;
    } else if (product < 0.0) {
      // Overshot: shrink and sit this one out (iRprop-).
      delta = std::max(delta * cfg.eta_minus, cfg.delta_min);
      state.prev_grad[i] = 0.0;
    } else {
      params[i] -= sign_of(g) * delta;
      state.prev_grad[i] = g;
    }
  }
}

// --- BFGS ------------------------------------------------------------------

BfgsState::BfgsState(Eigen::Index n, BfgsConfig config)
    : inv_hessian(Eigen::MatrixXd::Identity(n, n)), cfg(config) {}

void BfgsState::seed_current(double loss, Eigen::VectorXd grad) {
  cur_loss = loss;
  cur_grad = std::move(grad);
  has_cur = true;
}

BfgsStepResult bfgs_step(BfgsState& state, Eigen::VectorXd& params,
                         const LossGradFn& fn) {
  const Eigen::Index n = params.size();
  if (state.inv_hessian.rows() != n || state.inv_hessian.cols() != n) {
    throw ShapeError("bfgs: state dimension does not match parameter vector");
  }
  if (!state.has_cur) {
    LossGrad lg = fn(params);
    state.seed_current(lg.loss, std::move(lg.grad));
  }
  if (!std::isfinite(state.cur_loss)) {
    throw TrainError("bfgs: non-finite loss at current point");
  }
  if (!state.cur_grad.allFinite()) {
    throw TrainError("bfgs: non-finite gradient at current point");
  }
  if (state.cur_grad.isZero(0.0)) {
    return {state.cur_loss, 0.0, 0, false};
  }

  Eigen::VectorXd direction = -(state.inv_hessian * state.cur_grad);
  double dphi0 = direction.dot(state.cur_grad);
  if (!(dphi0 < 0.0)) {
    // Approximation lost positive definiteness; restart from identity.
    state.inv_hessian.setIdentity();
    state.first_update_done = false;
    direction = -state.cur_grad;
    dphi0 = -state.cur_grad.squaredNorm();
  }

  WolfeResult ls =
      WolfeSearch(fn, params, direction, state.cur_loss, dphi0, state.cfg)
          .run();

  if (!ls.ok) {
    // Non-descent signal: reset and take a short plain gradient step.
    state.inv_hessian.setIdentity();
    state.first_update_done = false;
    state.prev_point = params;
    state.prev_grad = state.cur_grad;
    state.has_prev = true;
    params -= state.cfg.fallback_step * state.cur_grad;
    LossGrad lg = fn(params);
    if (!std::isfinite(lg.loss)) {
      throw TrainError("bfgs: non-finite loss after fallback step");
    }
    state.seed_current(lg.loss, std::move(lg.grad));
    return {state.cur_loss, state.cfg.fallback_step, ls.evals + 1, true};
  }

  const Trial& t = ls.accepted;
  const Eigen::VectorXd s = t.x - params;
  const Eigen::VectorXd y = t.grad - state.cur_grad;
  const double sy = s.dot(y);
  if (sy > state.cfg.curvature_eps * s.norm() * y.norm()) {
    Eigen::MatrixXd& h = state.inv_hessian;
    if (!state.first_update_done) {
      // Scale the initial identity to the secant's curvature before the
      // first rank-two update (Nocedal-Wright style warm start).
      h = (sy / y.squaredNorm()) *
          Eigen::MatrixXd::Identity(n, n);
    }
    const double rho = 1.0 / sy;
    const Eigen::VectorXd hy = h * y;
    const double yhy = y.dot(hy);
    h.noalias() -= rho * (s * hy.transpose() + hy * s.transpose());
    h.noalias() += (rho * (1.0 + rho * yhy)) * (s * s.transpose());
    state.inv_hessian = ((h + h.transpose()) * 0.5).eval();
    state.first_update_done = true;
  }

  state.prev_point = params;
  state.prev_grad = state.cur_grad;
  state.has_prev = true;
  params = t.x;
  state.seed_current(t.f, t.grad);
  return {t.f, t.alpha, ls.evals, false};
}

BfgsStepResult bfgs_step(
    BfgsState& state, Eigen::VectorXd& params,
    const std::function<double(const Eigen::VectorXd&)>& loss_fn,
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& grad_fn) {
  return bfgs_step(state, params, [&](const Eigen::VectorXd& x) {
    return LossGrad{loss_fn(x), grad_fn(x)};
  });
}

// --- training schedule -----------------------------------------------------

std::string method_name(Method m) {
  switch (m) {
    case Method::kRprop: return "rprop";
    case Method::kBfgs: return "bfgs";
    case Method::kHybrid: return "hybrid";
  }
  return "?";
}

Method parse_method(const std::string& name) {
  if (name == "rprop") return Method::kRprop;
  if (name == "bfgs") return Method::kBfgs;
  if (name == "hybrid") return Method::kHybrid;
  throw ConfigError("method: unknown value '" + name +
                    "' (expected rprop, bfgs or hybrid)");
}

std::string step_label_name(StepLabel label) {
  switch (label) {
    case StepLabel::kInit: return "init";
    case StepLabel::kRprop: return "rprop";
    case StepLabel::kBfgs: return "bfgs";
  }
  return "?";
}

void TrainConfig::validate() const {
  if (total_iterations < 1) {
    std::ostringstream os;
    os << "iterations must be >= 1, got " << total_iterations;
    throw ConfigError(os.str());
  }
  if (!(switch_fraction >= 0.0 && switch_fraction <= 1.0)) {
    std::ostringstream os;
    os << "switch_fraction must lie in [0, 1], got " << switch_fraction;
    throw ConfigError(os.str());
  }
  if (!(grad_tolerance >= 0.0)) {
    throw ConfigError("grad_tolerance must be >= 0");
  }
}

int rprop_iterations(const TrainConfig& cfg) {
  switch (cfg.method) {
    case Method::kRprop: return cfg.total_iterations;
    case Method::kBfgs: return 0;
    case Method::kHybrid: break;
  }
  const double exact =
      cfg.switch_fraction * static_cast<double>(cfg.total_iterations);
  const int n = static_cast<int>(std::ceil(exact - 1e-6));
  return std::clamp(n, 0, cfg.total_iterations);
}

TrainTrace train(const Network& net, const SampleBatch& batch,
                 const TrainConfig& cfg) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  auto elapsed = [&start] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start)
        .count();
  };

  const NetworkSpec spec = net.spec();
  Eigen::VectorXd params = flatten(net);
  const LossGradFn fn = [&spec, &batch](const Eigen::VectorXd& v) {
    return sse_and_gradient(unflatten(spec, v), batch);
  };

  std::vector<TraceRecord> records;
  records.reserve(static_cast<std::size_t>(cfg.total_iterations) + 1);

  LossGrad cur = fn(params);
  records.push_back({0, StepLabel::kInit, cur.loss, elapsed()});

  bool stopped = false;
  if (cur.grad.lpNorm<Eigen::Infinity>() < cfg.grad_tolerance) {
    stopped = cfg.total_iterations > 0;
  } else {
    const int n_rprop = rprop_iterations(cfg);
    RpropState rprop_state(n_rprop > 0 ? params.size() : 0);
    BfgsState bfgs_state(0);

    for (int it = 1; it <= cfg.total_iterations; ++it) {
      StepLabel label;
      if (it <= n_rprop) {
        rprop_step(rprop_state, params, cur.grad);
        cur = fn(params);
        label = StepLabel::kRprop;
      } else {
        if (bfgs_state.inv_hessian.rows() != params.size()) {
          bfgs_state = BfgsState(params.size());
          bfgs_state.seed_current(cur.loss, cur.grad);
        }
        bfgs_step(bfgs_state, params, fn);
        cur.loss = bfgs_state.cur_loss;
        cur.grad = bfgs_state.cur_grad;
        label = StepLabel::kBfgs;
      }
      records.push_back({it, label, cur.loss, elapsed()});
      if (cur.grad.lpNorm<Eigen::Infinity>() < cfg.grad_tolerance) {
        stopped = it < cfg.total_iterations;
        break;
      }
    }
  }

  return TrainTrace{std::move(records), unflatten(spec, params), elapsed(),
                    stopped};
}

}  // namespace fieldcast
