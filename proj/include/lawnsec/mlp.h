// Copyright 2026 The LAWNSec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Dense ReLU network with a single flat parameter vector, forward tape and
// exact reverse-mode gradients. Batches are column-major: one sample per
// column.

#ifndef LAWNSEC_MLP_H_
#define LAWNSEC_MLP_H_

#include <random>
#include <vector>

#include <Eigen/Core>

namespace lawnsec {

enum class OutputActivation { kIdentity, kTanh };

class Mlp {
 public:
  Mlp() = default;
  // layer_sizes = {input, hidden..., output}; needs at least two entries.
  explicit Mlp(std::vector<int> layer_sizes,
               OutputActivation output = OutputActivation::kIdentity);

  // Weights and biases ~ U(-1/sqrt(fan_in), 1/sqrt(fan_in)).
  void InitUniform(std::mt19937_64& rng);

  int input_dim() const { return sizes_.front(); }
  int output_dim() const { return sizes_.back(); }
  int num_layers() const { return static_cast<int>(sizes_.size()) - 1; }
  int num_params() const { return static_cast<int>(params_.size()); }
  const std::vector<int>& layer_sizes() const { return sizes_; }
  OutputActivation output_activation() const { return output_; }

  Eigen::VectorXd& params() { return params_; }
  const Eigen::VectorXd& params() const { return params_; }

  struct Tape {
    // activations[0] is the input; activations[l + 1] the output of layer l.
    std::vector<Eigen::MatrixXd> activations;
  };

  Eigen::VectorXd Forward(const Eigen::VectorXd& x) const;
  Eigen::MatrixXd Forward(const Eigen::MatrixXd& x, Tape* tape) const;

  // Given dL/d(output) for the taped batch, adds dL/d(params) into
  // *param_grad (when non-null, sized num_params()) and returns dL/d(input).
  Eigen::MatrixXd Backward(const Tape& tape, const Eigen::MatrixXd& grad_out,
                           Eigen::VectorXd* param_grad) const;

  bool SameShape(const Mlp& other) const {
    return sizes_ == other.sizes_ && output_ == other.output_;
  }

 private:
  std::size_t WeightOffset(int layer) const { return offsets_[layer]; }
  std::size_t BiasOffset(int layer) const {
    return offsets_[layer] +
           static_cast<std::size_t>(sizes_[layer]) * sizes_[layer + 1];
  }

  std::vector<int> sizes_;
  std::vector<std::size_t> offsets_;
  OutputActivation output_ = OutputActivation::kIdentity;
  Eigen::VectorXd params_;
};

// target <- (1 - tau) * target + tau * online. Requires tau in (0, 1] and
// matching shapes.
void SoftUpdate(Mlp& target, const Mlp& online, double tau);

// Adaptive-moment optimizer over a flat parameter vector.
class Adam {
 public:
  Adam() = default;
  Adam(int num_params, double learning_rate, double beta1 = 0.9,
       double beta2 = 0.999, double epsilon = 1e-8);

  void Step(Eigen::VectorXd& params, const Eigen::VectorXd& grad);
  long steps() const { return step_; }

 private:
  double lr_ = 0.0;
  double beta1_ = 0.9;
  double beta2_ = 0.999;
  double eps_ = 1e-8;
  long step_ = 0;
  Eigen::VectorXd m_;
  Eigen::VectorXd v_;
};

}  // namespace lawnsec

#endif  // LAWNSEC_MLP_H_
