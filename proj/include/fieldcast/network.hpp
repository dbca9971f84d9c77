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

#ifndef FIELDCAST_NETWORK_HPP
#define FIELDCAST_NETWORK_HPP

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "fieldcast/errors.hpp"

namespace fieldcast {

enum class Activation { kTanh, kLogistic };

std::string activation_name(Activation a);
Activation parse_activation(const std::string& name);

/// Layer layout of a dense feed-forward regressor. The input layer counts as
/// a layer, so {14, 11, 9} is a "3-layer" network with one hidden layer.
/// Hidden layers use `hidden_activation`; the output layer is always linear.
struct NetworkSpec {
  std::vector<int> layer_sizes;
  Activation hidden_activation = Activation::kTanh;
  std::uint64_t init_seed = 0;

  void validate() const;  // throws ShapeError
  int input_size() const { return layer_sizes.front(); }
  int output_size() const { return layer_sizes.back(); }
};

/// Parse "14:11:9" into {14, 11, 9}.
std::vector<int> parse_layer_sizes(const std::string& text);
std::string layer_sizes_name(const std::vector<int>& sizes);

/// The three architecture presets used throughout the experiments, by name:
/// "14:11:9", "14:13:12:9", "14:13:12:11:9".
const std::vector<std::string>& architecture_presets();

/// Single hidden size between input and output: floor((in + out) / 2).
int pyramid_hidden_size(int input_size, int output_size);

/// Total parameter count: sum over layers of size_l * (size_{l-1} + 1).
Eigen::Index param_count(const NetworkSpec& spec);

/// Training batch in normalized units, one sample per row.
struct SampleBatch {
  Eigen::MatrixXd inputs;   // m x input_size
  Eigen::MatrixXd targets;  // m x output_size

  Eigen::Index size() const { return inputs.rows(); }
};

class Network {
public:
  /// All-zero parameters; use build_network() for the seeded random init.
  explicit Network(NetworkSpec spec);

  const NetworkSpec& spec() const { return spec_; }
  int num_weight_layers() const { return static_cast<int>(weights_.size()); }

  // weight matrix l has shape (size_{l+1} x size_l), bias length size_{l+1}
  const Eigen::MatrixXd& weights(int l) const { return weights_[l]; }
  const Eigen::VectorXd& biases(int l) const { return biases_[l]; }
  Eigen::MatrixXd& mutable_weights(int l) { return weights_[l]; }
  Eigen::VectorXd& mutable_biases(int l) { return biases_[l]; }

  /// One input vector -> output activations. Throws ShapeError on length
  /// mismatch, DataError on non-finite input.
  Eigen::VectorXd forward(const Eigen::VectorXd& input) const;

  /// Batched forward pass, one sample per row.
  Eigen::MatrixXd forward_batch(const Eigen::MatrixXd& inputs) const;

private:
  NetworkSpec spec_;
  std::vector<Eigen::MatrixXd> weights_;
  std::vector<Eigen::VectorXd> biases_;
};

/// Weights drawn uniformly from [-1/sqrt(fan_in), +1/sqrt(fan_in)] per layer
/// using spec.init_seed; biases zero.
Network build_network(const NetworkSpec& spec);

/// Sum over samples of the squared Euclidean distance between target and
/// predicted output vectors. No averaging.
double sse_loss(const Network& net, const SampleBatch& batch);

/// Exact gradient of sse_loss with respect to the flat parameter vector,
/// by reverse-mode backpropagation.
Eigen::VectorXd gradient(const Network& net, const SampleBatch& batch);

/// Loss and gradient from one forward/backward pass.
struct LossGrad {
  double loss;
  Eigen::VectorXd grad;
};
LossGrad sse_and_gradient(const Network& net, const SampleBatch& batch);

/// Flat parameter vector: layer-major, weights before bias within a layer,
/// row-major within each weight matrix.
Eigen::VectorXd flatten(const Network& net);
Network unflatten(const NetworkSpec& spec, const Eigen::VectorXd& params);

}  // namespace fieldcast

#endif  // FIELDCAST_NETWORK_HPP
