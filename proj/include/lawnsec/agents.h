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

// Off-policy actor-critic agents over the Mlp substrate: DDPG, TD3 (twin
// critics, clipped target noise, delayed actor) and SAC (squashed Gaussian
// policy, entropy-regularized targets, optional automatic temperature).

#ifndef LAWNSEC_AGENTS_H_
#define LAWNSEC_AGENTS_H_

#include <cstdint>
#include <memory>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "lawnsec/mlp.h"
#include "lawnsec/replay_buffer.h"

namespace lawnsec {

enum class Algorithm { kDdpg, kTd3, kSac };

std::string AlgorithmName(Algorithm a);
// Throws ConfigError for unknown names.
Algorithm ParseAlgorithm(const std::string& name);

struct AgentConfig {
  Algorithm algorithm = Algorithm::kTd3;
  std::vector<int> hidden = {128, 128};
  double actor_lr = 3e-4;
  double critic_lr = 3e-4;
  double gamma = 0.99;
  double tau = 0.005;
  double explore_noise = 0.1;      // ddpg/td3
  double target_noise = 0.2;       // td3
  double target_noise_clip = 0.5;  // td3
  int policy_delay = 2;            // td3
  bool auto_entropy = true;        // sac
  double init_alpha = 1.0;         // sac
  double alpha_lr = 3e-4;          // sac
  int buffer_capacity = 100000;
  int batch_size = 256;
  int warmup_steps = 1000;

  // Throws ConfigError.
  void Validate() const;
};

struct UpdateStats {
  double critic_loss = 0.0;
  double actor_loss = 0.0;
  bool actor_updated = false;
  double alpha = 0.0;    // sac
  double entropy = 0.0;  // sac: -mean log pi over the batch
};

class Agent {
 public:
  virtual ~Agent() = default;

  // Action in [-1, 1]^act_dim. Deterministic when explore is false.
  virtual std::vector<double> SelectAction(std::span<const double> obs,
                                           bool explore,
                                           std::mt19937_64& rng) const = 0;

  // One gradient step on a batch sampled with `sample_rng`. Requires
  // buffer.size() >= max(batch_size, warmup_steps). Throws TrainingError on a
  // non-finite loss or parameter.
  virtual UpdateStats Update(const ReplayBuffer& buffer,
                             std::mt19937_64& sample_rng) = 0;

  virtual nlohmann::json SaveState() const = 0;
  virtual void LoadState(const nlohmann::json& state) = 0;

  const AgentConfig& config() const { return config_; }
  int obs_dim() const { return obs_dim_; }
  int act_dim() const { return act_dim_; }
  long updates() const { return updates_; }

 protected:
  Agent(AgentConfig config, int obs_dim, int act_dim)
      : config_(std::move(config)), obs_dim_(obs_dim), act_dim_(act_dim) {}

  void CheckReady(const ReplayBuffer& buffer) const;

  AgentConfig config_;
  int obs_dim_;
  int act_dim_;
  long updates_ = 0;
};

// Deterministic tanh actor with one (DDPG) or two (TD3) critics.
class DeterministicAgent : public Agent {
 public:
  DeterministicAgent(AgentConfig config, int obs_dim, int act_dim,
                     std::uint64_t seed);

  std::vector<double> SelectAction(std::span<const double> obs, bool explore,
                                   std::mt19937_64& rng) const override;
  UpdateStats Update(const ReplayBuffer& buffer,
                     std::mt19937_64& sample_rng) override;
  nlohmann::json SaveState() const override;
  void LoadState(const nlohmann::json& state) override;

  const Mlp& actor() const { return actor_; }
  const Mlp& critic(int i) const { return critics_[i]; }
  long actor_updates() const { return actor_updates_; }

  // TD targets r + gamma (1 - d) Q'(s', a') for a batch.
  Eigen::VectorXd Targets(const Batch& batch);

 private:
  bool twin() const { return config_.algorithm == Algorithm::kTd3; }

  Mlp actor_;
  Mlp actor_target_;
  std::vector<Mlp> critics_;
  std::vector<Mlp> critic_targets_;
  Adam actor_opt_;
  std::vector<Adam> critic_opts_;
  std::mt19937_64 noise_rng_;
  long actor_updates_ = 0;
};

class SacAgent : public Agent {
 public:
  SacAgent(AgentConfig config, int obs_dim, int act_dim, std::uint64_t seed);

  std::vector<double> SelectAction(std::span<const double> obs, bool explore,
                                   std::mt19937_64& rng) const override;
  UpdateStats Update(const ReplayBuffer& buffer,
                     std::mt19937_64& sample_rng) override;
  nlohmann::json SaveState() const override;
  void LoadState(const nlohmann::json& state) override;

  const Mlp& actor() const { return actor_; }
  const Mlp& critic(int i) const { return critics_[i]; }
  double alpha() const;
  double target_entropy() const { return -static_cast<double>(act_dim_); }

 private:
  Mlp actor_;
  Mlp critics_[2];
  Mlp critic_targets_[2];
  Adam actor_opt_;
  Adam critic_opts_[2];
  Adam alpha_opt_;
  Eigen::VectorXd log_alpha_;  // 1 entry, so Adam applies unchanged
  std::mt19937_64 noise_rng_;
};

std::unique_ptr<Agent> MakeAgent(const AgentConfig& config, int obs_dim,
                                 int act_dim, std::uint64_t seed);

nlohmann::json AgentConfigToJson(const AgentConfig& config);
// Missing keys keep their defaults. Throws ConfigError.
AgentConfig AgentConfigFromJson(const nlohmann::json& j);

// Checkpoint container: {"format", "version", "agent_config", "obs_dim",
// "act_dim", "state"}.
nlohmann::json MakeCheckpoint(const Agent& agent);
std::unique_ptr<Agent> LoadCheckpoint(const nlohmann::json& checkpoint);

}  // namespace lawnsec

#endif  // LAWNSEC_AGENTS_H_
