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

// Episodic secure-communication MDP. The AAV flies at fixed altitude from
// `start` to `destination` inside a rectangular area while the base station
// beamforms to it; a ground jammer interferes with both the AAV and an
// aerial eavesdropper.
//
// Agents act in the normalized box [-1, 1]^(2 + 2M): the first two entries
// scale to a velocity (capped at v_max), the remaining 2M are the real and
// imaginary parts of the beamformer, always rescaled to full power p_max.

#ifndef LAWNSEC_ENV_H_
#define LAWNSEC_ENV_H_

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "lawnsec/augmentation_spec.h"
#include "lawnsec/dsl.h"
#include "lawnsec/radio.h"

namespace lawnsec {

struct RewardWeights {
  double w_sec = 0.1;
  double w_prog = 1.0;
  double arrival_bonus = 10.0;
  bool operator==(const RewardWeights&) const = default;
};

struct EnvConfig {
  double area_width = 200.0;
  double area_height = 200.0;
  // Only x/y of start and destination are used; the AAV flies at
  // aav_altitude.
  Pose start{20.0, 20.0, 0.0};
  Pose destination{180.0, 180.0, 0.0};
  Pose bs{150.0, 190.0, 0.0};
  Pose jammer{60.0, 100.0, 0.0};
  Pose eve{40.0, 150.0, 80.0};
  double aav_altitude = 100.0;
  double v_max = 10.0;
  double dt = 1.0;
  int horizon = 100;
  double arrival_radius = 5.0;
  // Uniform start perturbation (m) drawn from the reset seed; 0 disables.
  double start_jitter = 0.0;
  RewardWeights reward;
  RadioParams radio;
  std::optional<AugmentationSpec> augmentation;

  // Throws ConfigError.
  void Validate() const;
  double Diagonal() const;
  int ActionDim() const { return 2 + 2 * radio.num_antennas; }
};

// Names of the handcrafted observation features, in observation order.
const std::vector<std::string>& BaseFeatureNames();

// Variables available to feature expressions: the base features plus
// normalized actor geometry (scalars and 3-D position vectors) and the
// last-step link capacities. Positions are divided by the area diagonal.
const dsl::VarSchema& BaseSchema();

struct EnvState {
  Pose aav;
  int t = 0;
  bool terminal = false;
  SecrecyBreakdown last;  // link rates of the step that produced the state
  std::vector<double> base_features;
  std::vector<double> augmented_features;
};

struct MappedAction {
  double vx = 0.0;
  double vy = 0.0;
  Beamformer beam;
};

enum class TerminalReason { kNone, kReached, kHorizon };

struct StepResult {
  EnvState next_state;
  double reward = 0.0;
  double base_reward = 0.0;
  double intrinsic_reward = 0.0;
  SecrecyBreakdown rates;
  bool terminal = false;
  TerminalReason terminal_reason = TerminalReason::kNone;
};

struct EpisodeSummary {
  double sum_reward = 0.0;
  double sum_base_reward = 0.0;
  double sum_secrecy = 0.0;
  bool reached = false;
  int steps = 0;
};

class SecrecyEnv {
 public:
  // Validates the config and the augmentation against BaseSchema().
  explicit SecrecyEnv(EnvConfig config);

  EnvState Reset(std::uint64_t seed) const;
  // Throws UsageError on a terminal state and InputError on a wrong-sized
  // or non-finite action.
  StepResult Step(const EnvState& state, std::span<const double> action) const;

  // Maps a raw agent action to velocity and full-power beamformer.
  MappedAction MapAction(std::span<const double> action) const;

  // Base features followed by augmented features.
  std::vector<double> Observation(const EnvState& state) const;
  int ObservationDim() const;
  int ActionDim() const { return config_.ActionDim(); }

  dsl::Binding MakeBinding(const EnvState& state) const;
  const EnvConfig& config() const { return config_; }
  const dsl::EvalDiagnostics& diagnostics() const { return diagnostics_; }

 private:
  void FillFeatures(EnvState& state) const;
  double HorizontalDistanceToGoal(const Pose& aav) const;

  EnvConfig config_;
  mutable dsl::EvalDiagnostics diagnostics_;
};

// Throws InputError on an empty sequence.
EpisodeSummary SummarizeEpisode(std::span<const StepResult> results);

// Header "t,x,y,c_legit,c_eve,c_sec,reward" then one row per step.
void WriteTraceCsv(std::ostream& out, std::span<const StepResult> results);

}  // namespace lawnsec

#endif  // LAWNSEC_ENV_H_
