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

#include "lawnsec/mlp.h"

#include <cmath>

#include "lawnsec/errors.h"

namespace lawnsec {

using Eigen::Map;
using Eigen::MatrixXd;
using Eigen::VectorXd;

Mlp::Mlp(std::vector<int> layer_sizes, OutputActivation output)
    : sizes_(std::move(layer_sizes)), output_(output) {
  if (sizes_.size() < 2) throw InputError("an MLP needs >= 2 layer sizes");
  std::size_t total = 0;
  for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
    if (sizes_[l] < 1 || sizes_[l + 1] < 1) {
      throw InputError("layer sizes must be >= 1");
    }
    offsets_.push_back(total);
    total += static_cast<std::size_t>(sizes_[l]) * sizes_[l + 1] +
             sizes_[l + 1];
  }
  params_ = VectorXd::Zero(static_cast<Eigen::Index>(total));
}

void Mlp::InitUniform(std::mt19937_64& rng) {
  for (int l = 0; l < num_layers(); ++l) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(sizes_[l]));
    std::uniform_real_distribution<double> u(-bound, bound);
    const std::size_t end =
        l + 1 < num_layers() ? offsets_[l + 1] : params_.size();
    for (std::size_t i = offsets_[l]; i < end; ++i) params_[i] = u(rng);
  }
}

VectorXd Mlp::Forward(const VectorXd& x) const {
  MatrixXd out = Forward(MatrixXd(x), nullptr);
  return out.col(0);
}

MatrixXd Mlp::Forward(const MatrixXd& x, Tape* tape) const {
  if (x.rows() != input_dim()) {
    throw InputError("MLP input has " + std::to_string(x.rows()) +
                     " rows, expected " + std::to_string(input_dim()));
  }
  if (tape != nullptr) {
    tape->activations.resize(num_layers() + 1);
    tape->activations[0] = x;
  }
  MatrixXd a = x;
  for (int l = 0; l < num_layers(); ++l) {
    const int in = sizes_[l];
    const int out = sizes_[l + 1];
    Map<const MatrixXd> w(params_.data() + WeightOffset(l), out, in);
    Map<const VectorXd> b(params_.data() + BiasOffset(l), out);
    MatrixXd z(out, a.cols());
    z.noalias() = w * a;
    z.colwise() += b;
    if (l + 1 < num_layers()) {
      z = z.cwiseMax(0.0);
    } else if (output_ == OutputActivation::kTanh) {
      z = z.array().tanh().matrix();
    }
    a = std::move(z);
    if (tape != nullptr) tape->activations[l + 1] = a;
  }
  return a;
}

MatrixXd Mlp::Backward(const Tape& tape, const MatrixXd& grad_out,
                       VectorXd* param_grad) const {
  const int layers = num_layers();
  if (static_cast<int>(tape.activations.size()) != layers + 1) {
    throw UsageError("backward without a matching forward tape");
  }
  if (param_grad != nullptr && param_grad->size() != num_params()) {
    throw InputError("parameter gradient has the wrong size");
  }
  MatrixXd delta = grad_out;
  if (output_ == OutputActivation::kTanh) {
    delta.array() *= 1.0 - tape.activations[layers].array().square();
  }
  for (int l = layers - 1; l >= 0; --l) {
    const int in = sizes_[l];
    const int out = sizes_[l + 1];
    const MatrixXd& a_prev = tape.activations[l];
    if (param_grad != nullptr) {
      Map<MatrixXd> gw(param_grad->data() + WeightOffset(l), out, in);
      Map<VectorXd> gb(param_grad->data() + BiasOffset(l), out);
      gw.noalias() += delta * a_prev.transpose();
      gb += delta.rowwise().sum();
    }
    Map<const MatrixXd> w(params_.data() + WeightOffset(l), out, in);
    MatrixXd prev(in, delta.cols());
    prev.noalias() = w.transpose() * delta;
    if (l > 0) {
      // ReLU: pass gradient where the layer output was positive.
      prev = (a_prev.array() > 0.0).select(prev, 0.0);
    }
    delta = std::move(prev);
  }
  return delta;
}

void SoftUpdate(Mlp& target, const Mlp& online, double tau) {
  if (!(tau > 0.0 && tau <= 1.0)) throw InputError("tau must lie in (0, 1]");
  if (!target.SameShape(online)) {
    throw InputError("soft update between networks of different shape");
  }
  if (tau == 1.0) {
    target.params() = online.params();
    return;
  }
  target.params() = (1.0 - tau) * target.params() + tau * online.params();
}

Adam::Adam(int num_params, double learning_rate, double beta1, double beta2,
           double epsilon)
    : lr_(learning_rate),
      beta1_(beta1),
      beta2_(beta2),
      eps_(epsilon),
      m_(VectorXd::Zero(num_params)),
      v_(VectorXd::Zero(num_params)) {
  if (!(learning_rate > 0.0)) throw InputError("learning rate must be > 0");
}

void Adam::Step(VectorXd& params, const VectorXd& grad) {
  if (grad.size() != m_.size() || params.size() != m_.size()) {
    throw InputError("Adam step with mismatched sizes");
  }
  ++step_;
  m_ = beta1_ * m_ + (1.0 - beta1_) * grad;
  v_ = beta2_ * v_ + (1.0 - beta2_) * grad.cwiseAbs2();
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(step_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(step_));
  params.array() -=
      lr_ * (m_.array() / c1) / ((v_.array() / c2).sqrt() + eps_);
}

}  // namespace lawnsec
