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

// Single-seed training and greedy evaluation loops.

#ifndef LAWNSEC_TRAINER_H_
#define LAWNSEC_TRAINER_H_

#include <cstdint>
#include <functional>
#include <memory>
#include <ostream>
#include <vector>

#include "lawnsec/agents.h"
#include "lawnsec/env.h"

namespace lawnsec {

inline constexpr int kCsvSchemaVersion = 1;

struct EpisodeRecord {
  std::uint64_t seed = 0;
  int episode = 0;
  double episode_return = 0.0;  // base + intrinsic reward
  double base_return = 0.0;     // environment reward only
  double sum_secrecy = 0.0;     // bits/s/Hz summed over steps
  bool reached = false;
  int steps = 0;
  double wall_seconds = 0.0;    // not written to the episode CSV
};

struct TrainOptions {
  int episodes = 300;
  // Environment steps per gradient update once the buffer is warm.
  int update_every = 1;
};

struct TrainResult {
  std::vector<EpisodeRecord> episodes;
  std::unique_ptr<Agent> agent;
  long env_steps = 0;
  long updates = 0;
};

using EpisodeCallback = std::function<void(const EpisodeRecord&)>;

// Runs `options.episodes` training episodes from one master seed. All RNG
// streams derive from `seed` (see seeding.h).
TrainResult TrainSeed(const SecrecyEnv& env, const AgentConfig& agent_config,
                      const TrainOptions& options, std::uint64_t seed,
                      const EpisodeCallback& on_episode = nullptr);

struct EvalSummary {
  int episodes = 0;
  double mean_return = 0.0;
  double std_return = 0.0;
  double mean_base_return = 0.0;
  double mean_sum_secrecy = 0.0;
  double arrival_rate = 0.0;
  double mean_steps = 0.0;
};

// Greedy rollouts (explore = false); episode e resets with seed + e.
EvalSummary EvaluatePolicy(const SecrecyEnv& env, const Agent& agent,
                           int episodes, std::uint64_t seed);

// Same protocol with actions drawn uniformly from the box.
EvalSummary EvaluateRandomPolicy(const SecrecyEnv& env, int episodes,
                                 std::uint64_t seed);

// Versioned header comment, column header, then one row per record.
void WriteEpisodeCsv(std::ostream& out,
                     const std::vector<EpisodeRecord>& records);
// Parses a file written by WriteEpisodeCsv. Throws InputError.
std::vector<EpisodeRecord> ReadEpisodeCsv(std::istream& in);

}  // namespace lawnsec

#endif  // LAWNSEC_TRAINER_H_
