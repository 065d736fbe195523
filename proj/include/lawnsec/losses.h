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

// Training losses with exact gradients. Each function returns the loss value
// together with its gradient with respect to the parameters of the network
// being trained; everything else is held fixed.

#ifndef LAWNSEC_LOSSES_H_
#define LAWNSEC_LOSSES_H_

#include <Eigen/Core>

#include "lawnsec/mlp.h"

namespace lawnsec {

struct LossGrad {
  double loss = 0.0;
  Eigen::VectorXd grad;
};

// Vertical concatenation [obs; action] fed to Q-networks.
Eigen::MatrixXd CriticInput(const Eigen::MatrixXd& obs,
                            const Eigen::MatrixXd& action);

// mean_b (Q(s_b, a_b) - y_b)^2 over critic parameters.
LossGrad CriticLoss(const Mlp& critic, const Eigen::MatrixXd& obs,
                    const Eigen::MatrixXd& action,
                    const Eigen::VectorXd& targets);

// -mean_b Q(s_b, mu(s_b)) over actor parameters; mu has a tanh head.
LossGrad DeterministicActorLoss(const Mlp& actor, const Mlp& critic,
                                const Eigen::MatrixXd& obs);

// Squashed-Gaussian policy head: the actor emits [mean; raw] and
// log_std = kLogStdMin + (kLogStdMax - kLogStdMin) * (tanh(raw) + 1) / 2.
inline constexpr double kLogStdMin = -5.0;
inline constexpr double kLogStdMax = 2.0;

struct SquashedSample {
  Eigen::MatrixXd action;     // tanh(mean + std * noise), act_dim x n
  Eigen::VectorXd log_prob;   // n
  Eigen::MatrixXd mean;       // act_dim x n
};

// Reparameterized sample for fixed standard-normal `noise`.
SquashedSample SampleSquashed(const Mlp& actor, const Eigen::MatrixXd& obs,
                              const Eigen::MatrixXd& noise);

// mean_b (alpha * log pi(a_b|s_b) - min(Q1, Q2)(s_b, a_b)) over actor
// parameters, with a_b reparameterized from `noise`. Writes the sampled
// log-probabilities to *log_prob when non-null.
LossGrad SacActorLoss(const Mlp& actor, const Mlp& q1, const Mlp& q2,
                      const Eigen::MatrixXd& obs,
                      const Eigen::MatrixXd& noise, double alpha,
                      Eigen::VectorXd* log_prob = nullptr);

// -mean_b log_alpha * (log_prob_b + target_entropy); gradient is 1-vector.
LossGrad TemperatureLoss(double log_alpha, const Eigen::VectorXd& log_prob,
                         double target_entropy);

}  // namespace lawnsec

#endif  // LAWNSEC_LOSSES_H_
