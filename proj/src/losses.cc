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

#include "lawnsec/losses.h"

#include <cmath>
#include <numbers>

#include "lawnsec/errors.h"

namespace lawnsec {

using Eigen::ArrayXXd;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

constexpr double kHalfLogTwoPi = 0.91893853320467274178;  // log(2 pi) / 2

// log(1 - tanh(u)^2) = 2 (log 2 - u - softplus(-2u)), stable for large |u|.
ArrayXXd LogOneMinusTanhSq(const ArrayXXd& u) {
  const ArrayXXd x = -2.0 * u;
  const ArrayXXd softplus =
      x.max(0.0) + (-(x.abs())).exp().log1p();
  return 2.0 * (std::numbers::ln2 - u - softplus);
}

struct SquashedTape {
  Mlp::Tape actor_tape;
  ArrayXXd raw;
  ArrayXXd log_std;
  ArrayXXd std;
  ArrayXXd u;
};

SquashedSample SampleWithTape(const Mlp& actor, const MatrixXd& obs,
                              const MatrixXd& noise, SquashedTape* tape) {
  const int act_dim = actor.output_dim() / 2;
  if (noise.rows() != act_dim || noise.cols() != obs.cols()) {
    throw InputError("policy noise has the wrong shape");
  }
  Mlp::Tape local;
  Mlp::Tape* t = tape != nullptr ? &tape->actor_tape : &local;
  const MatrixXd out = actor.Forward(obs, t);
  SquashedSample s;
  s.mean = out.topRows(act_dim);
  const ArrayXXd raw = out.bottomRows(act_dim).array();
  const ArrayXXd log_std =
      kLogStdMin + 0.5 * (kLogStdMax - kLogStdMin) * (raw.tanh() + 1.0);
  const ArrayXXd std = log_std.exp();
  const ArrayXXd u = s.mean.array() + std * noise.array();
  s.action = u.tanh().matrix();
  const ArrayXXd per_dim = -0.5 * noise.array().square() - log_std -
                           kHalfLogTwoPi - LogOneMinusTanhSq(u);
  s.log_prob = per_dim.colwise().sum().transpose();
  if (tape != nullptr) {
    tape->raw = raw;
    tape->log_std = log_std;
    tape->std = std;
    tape->u = u;
  }
  return s;
}

}  // namespace

MatrixXd CriticInput(const MatrixXd& obs, const MatrixXd& action) {
  if (obs.cols() != action.cols()) {
    throw InputError("obs/action batch size mismatch");
  }
  MatrixXd x(obs.rows() + action.rows(), obs.cols());
  x.topRows(obs.rows()) = obs;
  x.bottomRows(action.rows()) = action;
  return x;
}

LossGrad CriticLoss(const Mlp& critic, const MatrixXd& obs,
                    const MatrixXd& action, const VectorXd& targets) {
  const double n = static_cast<double>(obs.cols());
  Mlp::Tape tape;
  const MatrixXd q = critic.Forward(CriticInput(obs, action), &tape);
  const Eigen::RowVectorXd err = q.row(0) - targets.transpose();
  LossGrad out;
  out.loss = err.squaredNorm() / n;
  out.grad = VectorXd::Zero(critic.num_params());
  critic.Backward(tape, (2.0 / n) * err, &out.grad);
  return out;
}

LossGrad DeterministicActorLoss(const Mlp& actor, const Mlp& critic,
                                const MatrixXd& obs) {
  const double n = static_cast<double>(obs.cols());
  Mlp::Tape actor_tape;
  const MatrixXd action = actor.Forward(obs, &actor_tape);
  Mlp::Tape critic_tape;
  const MatrixXd q = critic.Forward(CriticInput(obs, action), &critic_tape);
  LossGrad out;
  out.loss = -q.sum() / n;
  const MatrixXd dq = MatrixXd::Constant(1, obs.cols(), -1.0 / n);
  const MatrixXd d_input = critic.Backward(critic_tape, dq, nullptr);
  out.grad = VectorXd::Zero(actor.num_params());
  actor.Backward(actor_tape, d_input.bottomRows(action.rows()), &out.grad);
  return out;
}

SquashedSample SampleSquashed(const Mlp& actor, const MatrixXd& obs,
                              const MatrixXd& noise) {
  return SampleWithTape(actor, obs, noise, nullptr);
}

LossGrad SacActorLoss(const Mlp& actor, const Mlp& q1, const Mlp& q2,
                      const MatrixXd& obs, const MatrixXd& noise, double alpha,
                      VectorXd* log_prob) {
  const double n = static_cast<double>(obs.cols());
  const int act_dim = actor.output_dim() / 2;
  SquashedTape st;
  const SquashedSample s = SampleWithTape(actor, obs, noise, &st);
  const MatrixXd x = CriticInput(obs, s.action);
  Mlp::Tape t1;
  Mlp::Tape t2;
  const MatrixXd v1 = q1.Forward(x, &t1);
  const MatrixXd v2 = q2.Forward(x, &t2);

  MatrixXd g1 = MatrixXd::Zero(1, obs.cols());
  MatrixXd g2 = MatrixXd::Zero(1, obs.cols());
  double q_min_sum = 0.0;
  for (Eigen::Index b = 0; b < obs.cols(); ++b) {
    if (v1(0, b) <= v2(0, b)) {
      q_min_sum += v1(0, b);
      g1(0, b) = -1.0 / n;
    } else {
      q_min_sum += v2(0, b);
      g2(0, b) = -1.0 / n;
    }
  }
  LossGrad out;
  out.loss = (alpha * s.log_prob.sum() - q_min_sum) / n;

  const MatrixXd da = q1.Backward(t1, g1, nullptr).bottomRows(act_dim) +
                      q2.Backward(t2, g2, nullptr).bottomRows(act_dim);
  const ArrayXXd a = s.action.array();
  // d/du of the loss: through tanh into the critics, plus alpha/n times
  // d(log pi)/du = 2 tanh(u) from the squashing correction.
  const ArrayXXd du = da.array() * (1.0 - a.square()) + (alpha / n) * 2.0 * a;
  const ArrayXXd d_log_std = du * st.std * noise.array() - alpha / n;
  const ArrayXXd d_raw = d_log_std * 0.5 * (kLogStdMax - kLogStdMin) *
                         (1.0 - st.raw.tanh().square());
  MatrixXd d_out(2 * act_dim, obs.cols());
  d_out.topRows(act_dim) = du.matrix();
  d_out.bottomRows(act_dim) = d_raw.matrix();
  out.grad = VectorXd::Zero(actor.num_params());
  actor.Backward(st.actor_tape, d_out, &out.grad);
  if (log_prob != nullptr) *log_prob = s.log_prob;
  return out;
}

LossGrad TemperatureLoss(double log_alpha, const VectorXd& log_prob,
                         double target_entropy) {
  const double m = (log_prob.array() + target_entropy).mean();
  LossGrad out;
  out.loss = -log_alpha * m;
  out.grad = VectorXd::Constant(1, -m);
  return out;
}

}  // namespace lawnsec
