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

#include "lawnsec/agents.h"

#include <algorithm>
#include <cmath>

#include "lawnsec/errors.h"
#include "lawnsec/losses.h"
#include "lawnsec/seeding.h"

namespace lawnsec {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using nlohmann::json;

namespace {

constexpr const char* kCheckpointFormat = "lawnsec-checkpoint";
constexpr int kCheckpointVersion = 1;

std::vector<int> Sizes(int in, const std::vector<int>& hidden, int out) {
  std::vector<int> s{in};
  s.insert(s.end(), hidden.begin(), hidden.end());
  s.push_back(out);
  return s;
}

MatrixXd StandardNormal(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  MatrixXd m(rows, cols);
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, j) = n(rng);
  }
  return m;
}

void RequireFinite(double v, const char* what) {
  if (!std::isfinite(v)) {
    throw TrainingError(std::string("non-finite ") + what);
  }
}

void RequireFinite(const Mlp& net, const char* what) {
  if (!net.params().allFinite()) {
    throw TrainingError(std::string("non-finite parameters in ") + what);
  }
}

json ParamsToJson(const Mlp& net) {
  return std::vector<double>(net.params().data(),
                             net.params().data() + net.params().size());
}

void ParamsFromJson(const json& j, Mlp& net, const char* what) {
  const auto v = j.get<std::vector<double>>();
  if (static_cast<int>(v.size()) != net.num_params()) {
    throw ConfigError(std::string("checkpoint network '") + what +
                      "' has the wrong size");
  }
  net.params() = Eigen::Map<const VectorXd>(v.data(), v.size());
}

}  // namespace

std::string AlgorithmName(Algorithm a) {
  switch (a) {
    case Algorithm::kDdpg:
      return "ddpg";
    case Algorithm::kTd3:
      return "td3";
    case Algorithm::kSac:
      return "sac";
  }
  return "?";
}

Algorithm ParseAlgorithm(const std::string& name) {
  if (name == "ddpg") return Algorithm::kDdpg;
  if (name == "td3") return Algorithm::kTd3;
  if (name == "sac") return Algorithm::kSac;
  throw ConfigError("unknown algorithm '" + name + "'");
}

void AgentConfig::Validate() const {
  if (hidden.empty()) throw ConfigError("agent.hidden must be non-empty");
  for (int h : hidden) {
    if (h < 1) throw ConfigError("agent.hidden sizes must be >= 1");
  }
  if (!(actor_lr > 0.0) || !(critic_lr > 0.0) || !(alpha_lr > 0.0)) {
    throw ConfigError("learning rates must be > 0");
  }
  if (!(gamma > 0.0 && gamma < 1.0)) throw ConfigError("gamma must lie in (0, 1)");
  if (!(tau > 0.0 && tau <= 1.0)) throw ConfigError("tau must lie in (0, 1]");
  if (!(explore_noise >= 0.0) || !(target_noise >= 0.0) ||
      !(target_noise_clip >= 0.0)) {
    throw ConfigError("noise scales must be >= 0");
  }
  if (policy_delay < 1) throw ConfigError("policy_delay must be >= 1");
  if (!(init_alpha > 0.0)) throw ConfigError("init_alpha must be > 0");
  if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
  if (buffer_capacity < batch_size) {
    throw ConfigError("buffer_capacity must be >= batch_size");
  }
  if (warmup_steps < 0) throw ConfigError("warmup_steps must be >= 0");
}

void Agent::CheckReady(const ReplayBuffer& buffer) const {
  if (buffer.size() < std::max(config_.batch_size, config_.warmup_steps)) {
    throw UsageError("update before the buffer holds max(batch, warmup)");
  }
}

// ---------------------------------------------------------------------------
// DDPG / TD3

DeterministicAgent::DeterministicAgent(AgentConfig config, int obs_dim,
                                       int act_dim, std::uint64_t seed)
    : Agent(std::move(config), obs_dim, act_dim),
      noise_rng_(DeriveSeed(seed, Stream::kAgentNoise)) {
  config_.Validate();
  if (config_.algorithm == Algorithm::kSac) {
    throw ConfigError("DeterministicAgent cannot run sac");
  }
  std::mt19937_64 init(seed);
  actor_ = Mlp(Sizes(obs_dim, config_.hidden, act_dim), OutputActivation::kTanh);
  actor_.InitUniform(init);
  actor_target_ = actor_;
  const int n_critics = twin() ? 2 : 1;
  for (int i = 0; i < n_critics; ++i) {
    Mlp q(Sizes(obs_dim + act_dim, config_.hidden, 1));
    q.InitUniform(init);
    critics_.push_back(q);
    critic_targets_.push_back(q);
    critic_opts_.emplace_back(q.num_params(), config_.critic_lr);
  }
  actor_opt_ = Adam(actor_.num_params(), config_.actor_lr);
}

std::vector<double> DeterministicAgent::SelectAction(
    std::span<const double> obs, bool explore, std::mt19937_64& rng) const {
  if (static_cast<int>(obs.size()) != obs_dim_) {
    throw InputError("observation has the wrong dimension");
  }
  const VectorXd a =
      actor_.Forward(Eigen::Map<const VectorXd>(obs.data(), obs.size()));
  std::vector<double> out(a.data(), a.data() + a.size());
  if (explore && config_.explore_noise > 0.0) {
    std::normal_distribution<double> n(0.0, config_.explore_noise);
    for (double& v : out) v = std::clamp(v + n(rng), -1.0, 1.0);
  }
  return out;
}

VectorXd DeterministicAgent::Targets(const Batch& batch) {
  MatrixXd next_action = actor_target_.Forward(batch.next_obs, nullptr);
  if (twin() && config_.target_noise > 0.0) {
    MatrixXd noise = StandardNormal(act_dim_, batch.size(), noise_rng_) *
                     config_.target_noise;
    noise = noise.cwiseMax(-config_.target_noise_clip)
                .cwiseMin(config_.target_noise_clip);
    next_action = (next_action + noise).cwiseMax(-1.0).cwiseMin(1.0);
  }
  const MatrixXd x = CriticInput(batch.next_obs, next_action);
  VectorXd q_next = critic_targets_[0].Forward(x, nullptr).row(0).transpose();
  if (twin()) {
    q_next = q_next.cwiseMin(
        critic_targets_[1].Forward(x, nullptr).row(0).transpose());
  }
  return batch.reward.array() +
         config_.gamma * (1.0 - batch.done.array()) * q_next.array();
}

UpdateStats DeterministicAgent::Update(const ReplayBuffer& buffer,
                                       std::mt19937_64& sample_rng) {
  CheckReady(buffer);
  const Batch batch = buffer.Sample(config_.batch_size, sample_rng);
  const VectorXd y = Targets(batch);

  UpdateStats stats;
  for (std::size_t i = 0; i < critics_.size(); ++i) {
    const LossGrad lg = CriticLoss(critics_[i], batch.obs, batch.action, y);
    RequireFinite(lg.loss, "critic loss");
    critic_opts_[i].Step(critics_[i].params(), lg.grad);
    stats.critic_loss += lg.loss;
  }
  ++updates_;

  const int delay = twin() ? config_.policy_delay : 1;
  if (updates_ % delay == 0) {
    const LossGrad lg = DeterministicActorLoss(actor_, critics_[0], batch.obs);
    RequireFinite(lg.loss, "actor loss");
    actor_opt_.Step(actor_.params(), lg.grad);
    stats.actor_loss = lg.loss;
    stats.actor_updated = true;
    ++actor_updates_;
    SoftUpdate(actor_target_, actor_, config_.tau);
    for (std::size_t i = 0; i < critics_.size(); ++i) {
      SoftUpdate(critic_targets_[i], critics_[i], config_.tau);
    }
  }

  RequireFinite(actor_, "actor");
  for (const Mlp& q : critics_) RequireFinite(q, "critic");
  return stats;
}

json DeterministicAgent::SaveState() const {
  json j;
  j["actor"] = ParamsToJson(actor_);
  j["actor_target"] = ParamsToJson(actor_target_);
  for (std::size_t i = 0; i < critics_.size(); ++i) {
    j["critic" + std::to_string(i + 1)] = ParamsToJson(critics_[i]);
    j["critic" + std::to_string(i + 1) + "_target"] =
        ParamsToJson(critic_targets_[i]);
  }
  j["updates"] = updates_;
  j["actor_updates"] = actor_updates_;
  return j;
}

void DeterministicAgent::LoadState(const json& j) {
  ParamsFromJson(j.at("actor"), actor_, "actor");
  ParamsFromJson(j.at("actor_target"), actor_target_, "actor_target");
  for (std::size_t i = 0; i < critics_.size(); ++i) {
    const std::string key = "critic" + std::to_string(i + 1);
    ParamsFromJson(j.at(key), critics_[i], key.c_str());
    ParamsFromJson(j.at(key + "_target"), critic_targets_[i], key.c_str());
  }
  updates_ = j.at("updates").get<long>();
  actor_updates_ = j.at("actor_updates").get<long>();
}

// ---------------------------------------------------------------------------
// SAC

SacAgent::SacAgent(AgentConfig config, int obs_dim, int act_dim,
                   std::uint64_t seed)
    : Agent(std::move(config), obs_dim, act_dim),
      log_alpha_(VectorXd::Constant(1, 0.0)),
      noise_rng_(DeriveSeed(seed, Stream::kAgentNoise)) {
  config_.Validate();
  if (config_.algorithm != Algorithm::kSac) {
    throw ConfigError("SacAgent requires algorithm sac");
  }
  std::mt19937_64 init(seed);
  actor_ = Mlp(Sizes(obs_dim, config_.hidden, 2 * act_dim));
  actor_.InitUniform(init);
  for (int i = 0; i < 2; ++i) {
    critics_[i] = Mlp(Sizes(obs_dim + act_dim, config_.hidden, 1));
    critics_[i].InitUniform(init);
    critic_targets_[i] = critics_[i];
    critic_opts_[i] = Adam(critics_[i].num_params(), config_.critic_lr);
  }
  actor_opt_ = Adam(actor_.num_params(), config_.actor_lr);
  alpha_opt_ = Adam(1, config_.alpha_lr);
  log_alpha_[0] = std::log(config_.init_alpha);
}

double SacAgent::alpha() const { return std::exp(log_alpha_[0]); }

std::vector<double> SacAgent::SelectAction(std::span<const double> obs,
                                           bool explore,
                                           std::mt19937_64& rng) const {
  if (static_cast<int>(obs.size()) != obs_dim_) {
    throw InputError("observation has the wrong dimension");
  }
  const MatrixXd x = Eigen::Map<const VectorXd>(obs.data(), obs.size());
  MatrixXd action;
  if (explore) {
    action = SampleSquashed(actor_, x, StandardNormal(act_dim_, 1, rng)).action;
  } else {
    action = actor_.Forward(x, nullptr).topRows(act_dim_).array().tanh();
  }
  return std::vector<double>(action.data(), action.data() + action.size());
}

UpdateStats SacAgent::Update(const ReplayBuffer& buffer,
                             std::mt19937_64& sample_rng) {
  CheckReady(buffer);
  const Batch batch = buffer.Sample(config_.batch_size, sample_rng);
  const int n = batch.size();
  const double a = alpha();

  const SquashedSample next = SampleSquashed(
      actor_, batch.next_obs, StandardNormal(act_dim_, n, noise_rng_));
  const MatrixXd x_next = CriticInput(batch.next_obs, next.action);
  const VectorXd q_next =
      critic_targets_[0]
          .Forward(x_next, nullptr)
          .row(0)
          .transpose()
          .cwiseMin(critic_targets_[1].Forward(x_next, nullptr).row(0).transpose());
  const VectorXd y =
      batch.reward.array() + config_.gamma * (1.0 - batch.done.array()) *
                                 (q_next.array() - a * next.log_prob.array());

  UpdateStats stats;
  for (int i = 0; i < 2; ++i) {
    const LossGrad lg = CriticLoss(critics_[i], batch.obs, batch.action, y);
    RequireFinite(lg.loss, "critic loss");
    critic_opts_[i].Step(critics_[i].params(), lg.grad);
    stats.critic_loss += lg.loss;
  }

  VectorXd log_prob;
  const LossGrad actor_lg =
      SacActorLoss(actor_, critics_[0], critics_[1], batch.obs,
                   StandardNormal(act_dim_, n, noise_rng_), a, &log_prob);
  RequireFinite(actor_lg.loss, "actor loss");
  actor_opt_.Step(actor_.params(), actor_lg.grad);
  stats.actor_loss = actor_lg.loss;
  stats.actor_updated = true;
  stats.entropy = -log_prob.mean();

  if (config_.auto_entropy) {
    const LossGrad alpha_lg =
        TemperatureLoss(log_alpha_[0], log_prob, target_entropy());
    RequireFinite(alpha_lg.loss, "temperature loss");
    alpha_opt_.Step(log_alpha_, alpha_lg.grad);
  }
  stats.alpha = alpha();

  for (int i = 0; i < 2; ++i) {
    SoftUpdate(critic_targets_[i], critics_[i], config_.tau);
  }
  ++updates_;

  RequireFinite(actor_, "actor");
  RequireFinite(critics_[0], "critic1");
  RequireFinite(critics_[1], "critic2");
  RequireFinite(log_alpha_[0], "log_alpha");
  return stats;
}

json SacAgent::SaveState() const {
  json j;
  j["actor"] = ParamsToJson(actor_);
  for (int i = 0; i < 2; ++i) {
    j["critic" + std::to_string(i + 1)] = ParamsToJson(critics_[i]);
    j["critic" + std::to_string(i + 1) + "_target"] =
        ParamsToJson(critic_targets_[i]);
  }
  j["log_alpha"] = log_alpha_[0];
  j["updates"] = updates_;
  return j;
}

void SacAgent::LoadState(const json& j) {
  ParamsFromJson(j.at("actor"), actor_, "actor");
  for (int i = 0; i < 2; ++i) {
    const std::string key = "critic" + std::to_string(i + 1);
    ParamsFromJson(j.at(key), critics_[i], key.c_str());
    ParamsFromJson(j.at(key + "_target"), critic_targets_[i], key.c_str());
  }
  log_alpha_[0] = j.at("log_alpha").get<double>();
  updates_ = j.at("updates").get<long>();
}

// ---------------------------------------------------------------------------

std::unique_ptr<Agent> MakeAgent(const AgentConfig& config, int obs_dim,
                                 int act_dim, std::uint64_t seed) {
  if (config.algorithm == Algorithm::kSac) {
    return std::make_unique<SacAgent>(config, obs_dim, act_dim, seed);
  }
  return std::make_unique<DeterministicAgent>(config, obs_dim, act_dim, seed);
}

json AgentConfigToJson(const AgentConfig& c) {
  return json{
      {"algorithm", AlgorithmName(c.algorithm)},
      {"hidden", c.hidden},
      {"actor_lr", c.actor_lr},
      {"critic_lr", c.critic_lr},
      {"gamma", c.gamma},
      {"tau", c.tau},
      {"explore_noise", c.explore_noise},
      {"target_noise", c.target_noise},
      {"target_noise_clip", c.target_noise_clip},
      {"policy_delay", c.policy_delay},
      {"auto_entropy", c.auto_entropy},
      {"init_alpha", c.init_alpha},
      {"alpha_lr", c.alpha_lr},
      {"buffer_capacity", c.buffer_capacity},
      {"batch_size", c.batch_size},
      {"warmup_steps", c.warmup_steps},
  };
}

AgentConfig AgentConfigFromJson(const json& j) {
  AgentConfig c;
  try {
    if (j.contains("algorithm")) {
      c.algorithm = ParseAlgorithm(j.at("algorithm").get<std::string>());
    }
    auto read = [&j](const char* key, auto& field) {
      if (j.contains(key)) {
        field = j.at(key).get<std::decay_t<decltype(field)>>();
      }
    };
    read("hidden", c.hidden);
    read("actor_lr", c.actor_lr);
    read("critic_lr", c.critic_lr);
    read("gamma", c.gamma);
    read("tau", c.tau);
    read("explore_noise", c.explore_noise);
    read("target_noise", c.target_noise);
    read("target_noise_clip", c.target_noise_clip);
    read("policy_delay", c.policy_delay);
    read("auto_entropy", c.auto_entropy);
    read("init_alpha", c.init_alpha);
    read("alpha_lr", c.alpha_lr);
    read("buffer_capacity", c.buffer_capacity);
    read("batch_size", c.batch_size);
    read("warmup_steps", c.warmup_steps);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("agent config: ") + e.what());
  }
  c.Validate();
  return c;
}

json MakeCheckpoint(const Agent& agent) {
  return json{
      {"format", kCheckpointFormat},
      {"version", kCheckpointVersion},
      {"agent_config", AgentConfigToJson(agent.config())},
      {"obs_dim", agent.obs_dim()},
      {"act_dim", agent.act_dim()},
      {"state", agent.SaveState()},
  };
}

std::unique_ptr<Agent> LoadCheckpoint(const json& checkpoint) {
  try {
    if (checkpoint.at("format").get<std::string>() != kCheckpointFormat ||
        checkpoint.at("version").get<int>() != kCheckpointVersion) {
      throw ConfigError("unsupported checkpoint format/version");
    }
    const AgentConfig config =
        AgentConfigFromJson(checkpoint.at("agent_config"));
    auto agent = MakeAgent(config, checkpoint.at("obs_dim").get<int>(),
                           checkpoint.at("act_dim").get<int>(), 0);
    agent->LoadState(checkpoint.at("state"));
    return agent;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("checkpoint: ") + e.what());
  }
}

}  // namespace lawnsec
