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

#include "fieldcast/network.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace fieldcast {
namespace {

Eigen::MatrixXd apply_activation(const Eigen::MatrixXd& z, Activation act) {
  switch (act) {
    case Activation::kTanh:
      return z.array().tanh();
    case Activation::kLogistic:
      return (1.0 / (1.0 + (-z.array()).exp())).matrix();
  }
  throw ShapeError("unknown activation");
}

// Derivative with respect to the pre-activation, written in terms of the
// activation value a.
Eigen::ArrayXXd activation_deriv(const Eigen::MatrixXd& a, Activation act) {
  switch (act) {
    case Activation::kTanh:
      return 1.0 - a.array().square();
    case Activation::kLogistic:
      return a.array() * (1.0 - a.array());
  }
  throw ShapeError("unknown activation");
}

void check_batch(const Network& net, const SampleBatch& batch) {
  if (batch.inputs.rows() != batch.targets.rows()) {
    std::ostringstream os;
    os << "batch row counts differ: " << batch.inputs.rows() << " inputs vs "
       << batch.targets.rows() << " targets";
    throw ShapeError(os.str());
  }
  if (batch.inputs.cols() != net.spec().input_size() ||
      batch.targets.cols() != net.spec().output_size()) {
    std::ostringstream os;
    os << "batch shape (" << batch.inputs.cols() << " in, "
       << batch.targets.cols() << " out) does not match network ("
       << net.spec().input_size() << " in, " << net.spec().output_size()
       << " out)";
    throw ShapeError(os.str());
  }
}

}  // namespace

std::string activation_name(Activation a) {
  return a == Activation::kTanh ? "tanh" : "logistic";
}

Activation parse_activation(const std::string& name) {
  if (name == "tanh") return Activation::kTanh;
  if (name == "logistic") return Activation::kLogistic;
  throw ConfigError("activation: unknown value '" + name +
                    "' (expected tanh or logistic)");
}

void NetworkSpec::validate() const {
  if (layer_sizes.size() < 2) {
    throw ShapeError("network needs at least an input and an output layer");
  }
  for (int s : layer_sizes) {
    if (s < 1) {
      throw ShapeError("layer sizes must be >= 1, got " +
                       layer_sizes_name(layer_sizes));
    }
  }
}

std::vector<int> parse_layer_sizes(const std::string& text) {
  std::vector<int> sizes;
  std::istringstream in(text);
  std::string part;
  while (std::getline(in, part, ':')) {
    try {
      std::size_t pos = 0;
      int v = std::stoi(part, &pos);
      if (pos != part.size() || v < 1) throw std::invalid_argument(part);
      sizes.push_back(v);
    } catch (const std::exception&) {
      throw ConfigError("layers: cannot parse '" + text +
                        "' (expected colon-separated positive sizes)");
    }
  }
  if (sizes.size() < 2) {
    throw ConfigError("layers: '" + text + "' needs at least two sizes");
  }
  return sizes;
}

std::string layer_sizes_name(const std::vector<int>& sizes) {
  std::ostringstream os;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (i) os << ':';
    os << sizes[i];
  }
  return os.str();
}

const std::vector<std::string>& architecture_presets() {
  static const std::vector<std::string> kPresets = {
      "14:11:9", "14:13:12:9", "14:13:12:11:9"};
  return kPresets;
}

int pyramid_hidden_size(int input_size, int output_size) {
  return (input_size + output_size) / 2;
}

Eigen::Index param_count(const NetworkSpec& spec) {
  spec.validate();
  Eigen::Index p = 0;
  for (std::size_t l = 1; l < spec.layer_sizes.size(); ++l) {
    p += static_cast<Eigen::Index>(spec.layer_sizes[l]) *
         (spec.layer_sizes[l - 1] + 1);
  }
  return p;
}

Network::Network(NetworkSpec spec) : spec_(std::move(spec)) {
  spec_.validate();
  const auto& sz = spec_.layer_sizes;
  for (std::size_t l = 1; l < sz.size(); ++l) {
    weights_.emplace_back(Eigen::MatrixXd::Zero(sz[l], sz[l - 1]));
    biases_.emplace_back(Eigen::VectorXd::Zero(sz[l]));
  }
}

Network build_network(const NetworkSpec& spec) {
  Network net(spec);
  std::mt19937_64 rng(spec.init_seed);
  for (int l = 0; l < net.num_weight_layers(); ++l) {
    Eigen::MatrixXd& w = net.mutable_weights(l);
    const double bound = 1.0 / std::sqrt(static_cast<double>(w.cols()));
    std::uniform_real_distribution<double> dist(-bound, bound);
    // Draw in flatten order (row-major) so the seed pins the flat vector.
    for (Eigen::Index i = 0; i < w.rows(); ++i) {
      for (Eigen::Index j = 0; j < w.cols(); ++j) {
        w(i, j) = dist(rng);
      }
    }
  }
  return net;
}

Eigen::VectorXd Network::forward(const Eigen::VectorXd& input) const {
  if (input.size() != spec_.input_size()) {
    std::ostringstream os;
    os << "input length " << input.size() << " does not match input layer "
       << spec_.input_size();
    throw ShapeError(os.str());
  }
  if (!input.allFinite()) {
    throw DataError("forward: input contains a non-finite value");
  }
  return forward_batch(input.transpose()).row(0);
}

Eigen::MatrixXd Network::forward_batch(const Eigen::MatrixXd& inputs) const {
  if (inputs.cols() != spec_.input_size()) {
    std::ostringstream os;
    os << "input width " << inputs.cols() << " does not match input layer "
       << spec_.input_size();
    throw ShapeError(os.str());
  }
  Eigen::MatrixXd a = inputs;
  const int last = num_weight_layers() - 1;
  for (int l = 0; l <= last; ++l) {
    Eigen::MatrixXd z =
        (a * weights_[l].transpose()).rowwise() + biases_[l].transpose();
    a = (l == last) ? std::move(z)
                    : apply_activation(z, spec_.hidden_activation);
  }
  return a;
}

double sse_loss(const Network& net, const SampleBatch& batch) {
  check_batch(net, batch);
  return (net.forward_batch(batch.inputs) - batch.targets).squaredNorm();
}

LossGrad sse_and_gradient(const Network& net, const SampleBatch& batch) {
  check_batch(net, batch);
  const int layers = net.num_weight_layers();

  // Forward pass keeping each layer's activations for the backward sweep.
  std::vector<Eigen::MatrixXd> acts;
  acts.reserve(layers + 1);
  acts.push_back(batch.inputs);
  for (int l = 0; l < layers; ++l) {
    Eigen::MatrixXd z = (acts.back() * net.weights(l).transpose()).rowwise() +
                        net.biases(l).transpose();
    acts.push_back(l == layers - 1
                       ? std::move(z)
                       : apply_activation(z, net.spec().hidden_activation));
  }

  const Eigen::MatrixXd residual = acts.back() - batch.targets;
  const double loss = residual.squaredNorm();

  Eigen::VectorXd grad(param_count(net.spec()));
  Eigen::Index offset = grad.size();
  Eigen::MatrixXd delta = 2.0 * residual;  // d(SSE)/d(output pre-activation)
  for (int l = layers - 1; l >= 0; --l) {
    const Eigen::MatrixXd gw = delta.transpose() * acts[l];
    const Eigen::VectorXd gb = delta.colwise().sum();

    offset -= gb.size() + gw.size();
    Eigen::Index pos = offset;
    for (Eigen::Index i = 0; i < gw.rows(); ++i) {
      grad.segment(pos, gw.cols()) = gw.row(i);
      pos += gw.cols();
    }
    grad.segment(pos, gb.size()) = gb;

    if (l > 0) {
      delta = ((delta * net.weights(l)).array() *
               activation_deriv(acts[l], net.spec().hidden_activation))
                  .matrix();
    }
  }
  return {loss, std::move(grad)};
}

Eigen::VectorXd gradient(const Network& net, const SampleBatch& batch) {
  return sse_and_gradient(net, batch).grad;
}

Eigen::VectorXd flatten(const Network& net) {
  Eigen::VectorXd v(param_count(net.spec()));
  Eigen::Index pos = 0;
  for (int l = 0; l < net.num_weight_layers(); ++l) {
    const Eigen::MatrixXd& w = net.weights(l);
    for (Eigen::Index i = 0; i < w.rows(); ++i) {
      v.segment(pos, w.cols()) = w.row(i);
      pos += w.cols();
    }
    v.segment(pos, net.biases(l).size()) = net.biases(l);
    pos += net.biases(l).size();
  }
  return v;
}

Network unflatten(const NetworkSpec& spec, const Eigen::VectorXd& params) {
  const Eigen::Index expected = param_count(spec);
  if (params.size() != expected) {
    std::ostringstream os;
    os << "parameter vector length " << params.size() << " does not match "
       << layer_sizes_name(spec.layer_sizes) << " (needs " << expected << ")";
    throw ShapeError(os.str());
  }
  Network net(spec);
  Eigen::Index pos = 0;
  for (int l = 0; l < net.num_weight_layers(); ++l) {
    Eigen::MatrixXd& w = net.mutable_weights(l);
    for (Eigen::Index i = 0; i < w.rows(); ++i) {
      w.row(i) = params.segment(pos, w.cols());
      pos += w.cols();
    }
    net.mutable_biases(l) = params.segment(pos, w.rows());
    pos += w.rows();
  }
  return net;
}

}  // namespace fieldcast
