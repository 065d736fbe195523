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

#include "lawnsec/trainer.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <string>

#include "lawnsec/errors.h"
#include "lawnsec/seeding.h"

namespace lawnsec {
namespace {

std::vector<double> UniformAction(int dim, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> a(dim);
  for (double& v : a) v = u(rng);
  return a;
}

EvalSummary Summarize(const std::vector<EpisodeSummary>& eps) {
  EvalSummary s;
  s.episodes = static_cast<int>(eps.size());
  if (eps.empty()) return s;
  for (const auto& e : eps) {
    s.mean_return += e.sum_reward;
    s.mean_base_return += e.sum_base_reward;
    s.mean_sum_secrecy += e.sum_secrecy;
    s.arrival_rate += e.reached ? 1.0 : 0.0;
    s.mean_steps += e.steps;
  }
  const double n = static_cast<double>(eps.size());
  s.mean_return /= n;
  s.mean_base_return /= n;
  s.mean_sum_secrecy /= n;
  s.arrival_rate /= n;
  s.mean_steps /= n;
  double var = 0.0;
  for (const auto& e : eps) {
    var += (e.sum_reward - s.mean_return) * (e.sum_reward - s.mean_return);
  }
  s.std_return = std::sqrt(var / n);
  return s;
}

template <typename Policy>
EpisodeSummary Rollout(const SecrecyEnv& env, std::uint64_t reset_seed,
                       Policy&& policy) {
  EnvState state = env.Reset(reset_seed);
  std::vector<StepResult> steps;
  steps.reserve(env.config().horizon);
  while (!state.terminal) {
    steps.push_back(env.Step(state, policy(env.Observation(state))));
    state = steps.back().next_state;
  }
  return SummarizeEpisode(steps);
}

}  // namespace

TrainResult TrainSeed(const SecrecyEnv& env, const AgentConfig& agent_config,
                      const TrainOptions& options, std::uint64_t seed,
                      const EpisodeCallback& on_episode) {
  if (options.episodes < 1) throw ConfigError("episodes must be >= 1");
  if (options.update_every < 1) throw ConfigError("update_every must be >= 1");
  agent_config.Validate();

  const int obs_dim = env.ObservationDim();
  const int act_dim = env.ActionDim();
  TrainResult result;
  result.agent = MakeAgent(agent_config, obs_dim, act_dim,
                           DeriveSeed(seed, Stream::kAgentInit));
  Agent& agent = *result.agent;
  ReplayBuffer buffer(agent_config.buffer_capacity, obs_dim, act_dim);
  std::mt19937_64 explore_rng(DeriveSeed(seed, Stream::kExploration));
  std::mt19937_64 sample_rng(DeriveSeed(seed, Stream::kBufferSampling));
  const std::uint64_t env_seed = DeriveSeed(seed, Stream::kEnv);
  const int ready = std::max(agent_config.batch_size, agent_config.warmup_steps);

  for (int ep = 0; ep < options.episodes; ++ep) {
    const auto t0 = std::chrono::steady_clock::now();
    EnvState state = env.Reset(env_seed + static_cast<std::uint64_t>(ep));
    std::vector<double> obs = env.Observation(state);
    EpisodeRecord rec;
    rec.seed = seed;
    rec.episode = ep;
    while (!state.terminal) {
      const std::vector<double> action =
          result.env_steps < agent_config.warmup_steps
              ? UniformAction(act_dim, explore_rng)
              : agent.SelectAction(obs, true, explore_rng);
      StepResult step = env.Step(state, action);
      std::vector<double> next_obs = env.Observation(step.next_state);
      buffer.Add(obs, action, step.reward, next_obs, step.terminal);
      ++result.env_steps;

      rec.episode_return += step.reward;
      rec.base_return += step.base_reward;
      rec.sum_secrecy += step.rates.c_sec;
      ++rec.steps;
      if (step.terminal) {
        rec.reached = step.terminal_reason == TerminalReason::kReached;
      }

      if (buffer.size() >= ready &&
          result.env_steps % options.update_every == 0) {
        agent.Update(buffer, sample_rng);
        ++result.updates;
      }
      state = std::move(step.next_state);
      obs = std::move(next_obs);
    }
    rec.wall_seconds = std::chrono::duration<double>(
                           std::chrono::steady_clock::now() - t0)
                           .count();
    if (on_episode) on_episode(rec);
    result.episodes.push_back(rec);
  }
  return result;
}

EvalSummary EvaluatePolicy(const SecrecyEnv& env, const Agent& agent,
                           int episodes, std::uint64_t seed) {
  if (episodes < 1) throw ConfigError("episodes must be >= 1");
  std::mt19937_64 unused(0);
  std::vector<EpisodeSummary> eps;
  for (int e = 0; e < episodes; ++e) {
    eps.push_back(Rollout(env, seed + static_cast<std::uint64_t>(e),
                          [&](const std::vector<double>& obs) {
                            return agent.SelectAction(obs, false, unused);
                          }));
  }
  return Summarize(eps);
}

EvalSummary EvaluateRandomPolicy(const SecrecyEnv& env, int episodes,
                                 std::uint64_t seed) {
  if (episodes < 1) throw ConfigError("episodes must be >= 1");
  std::mt19937_64 rng(DeriveSeed(seed, Stream::kExploration));
  std::vector<EpisodeSummary> eps;
  for (int e = 0; e < episodes; ++e) {
    eps.push_back(Rollout(env, seed + static_cast<std::uint64_t>(e),
                          [&](const std::vector<double>&) {
                            return UniformAction(env.ActionDim(), rng);
                          }));
  }
  return Summarize(eps);
}

void WriteEpisodeCsv(std::ostream& out,
                     const std::vector<EpisodeRecord>& records) {
  out << "# lawnsec episode log v" << kCsvSchemaVersion << '\n';
  out << "seed,episode,return,base_return,sum_secrecy,reached,steps\n";
  const auto prec = out.precision();
  out << std::setprecision(17);
  for (const auto& r : records) {
    out << r.seed << ',' << r.episode << ',' << r.episode_return << ','
        << r.base_return << ',' << r.sum_secrecy << ',' << (r.reached ? 1 : 0)
        << ',' << r.steps << '\n';
  }
  out.precision(prec);
}

std::vector<EpisodeRecord> ReadEpisodeCsv(std::istream& in) {
  std::vector<EpisodeRecord> out;
  std::string line;
  bool header_seen = false;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      if (line.rfind("seed,episode,return", 0) != 0) {
        throw InputError("episode CSV: unexpected header");
      }
      header_seen = true;
      continue;
    }
    std::istringstream row(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(row, cell, ',')) cells.push_back(cell);
    if (cells.size() != 7) {
      throw InputError("episode CSV: line " + std::to_string(line_no) +
                       " has " + std::to_string(cells.size()) + " fields");
    }
    try {
      EpisodeRecord r;
      r.seed = std::stoull(cells[0]);
      r.episode = std::stoi(cells[1]);
      r.episode_return = std::stod(cells[2]);
      r.base_return = std::stod(cells[3]);
      r.sum_secrecy = std::stod(cells[4]);
      r.reached = cells[5] == "1";
      r.steps = std::stoi(cells[6]);
      out.push_back(r);
    } catch (const std::exception&) {
      throw InputError("episode CSV: malformed line " +
                       std::to_string(line_no));
    }
  }
  if (!header_seen) throw InputError("episode CSV: missing header");
  return out;
}

}  // namespace lawnsec
