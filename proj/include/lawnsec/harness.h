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

// Experiment orchestration behind the command-line tool: run configs,
// augmentation resolution, multi-seed training, evaluation, oracle reports
// and plotting.

#ifndef LAWNSEC_HARNESS_H_
#define LAWNSEC_HARNESS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "lawnsec/agents.h"
#include "lawnsec/env.h"
#include "lawnsec/llm.h"
#include "lawnsec/oracle.h"
#include "lawnsec/trainer.h"

namespace lawnsec {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kManifestFormat = "lawnsec-run-manifest";

// Process exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitProvider = 3;
inline constexpr int kExitDivergence = 4;

enum class AugmentationMode { kOff, kMock, kRemote, kFile, kInline };

struct AugmentationSource {
  AugmentationMode mode = AugmentationMode::kOff;
  std::string path;          // kFile: reply text or saved spec JSON
  nlohmann::json spec;       // kInline: {"features": [...], "intrinsic": {...}}
};

struct RunConfig {
  EnvConfig env;
  AgentConfig agent;
  ProviderConfig provider;
  AugmentationSource augmentation;
  int episodes = 2000;
  std::vector<std::uint64_t> seeds{1};
  int update_every = 1;
  int eval_episodes = 10;
  int workers = 1;  // seeds trained concurrently
  std::string output_dir = "runs/default";

  // Throws ConfigError.
  void Validate() const;
};

nlohmann::json EnvConfigToJson(const EnvConfig& config);
// Missing keys keep their defaults; unknown keys are rejected.
EnvConfig EnvConfigFromJson(const nlohmann::json& j);

nlohmann::json RunConfigToJson(const RunConfig& config);
// Relative fixture and augmentation paths resolve against `base_dir`.
RunConfig RunConfigFromJson(const nlohmann::json& j,
                            const std::string& base_dir = "");
// Accepts a config file or a run manifest (its "replay_config" entry).
RunConfig LoadRunConfig(const std::string& path);

struct ResolvedAugmentation {
  std::optional<AugmentationSpec> spec;
  std::vector<std::string> diagnostics;
  std::string reply;  // raw provider/fixture text, empty for off/inline
  ProviderStats stats;
};

// Throws ProviderError or AugmentationError.
ResolvedAugmentation ResolveAugmentation(const RunConfig& config);

struct SeedRun {
  std::uint64_t seed = 0;
  std::vector<EpisodeRecord> episodes;
  nlohmann::json checkpoint;
  EvalSummary eval;
};

struct RunResult {
  std::vector<SeedRun> seeds;
  ResolvedAugmentation augmentation;
  nlohmann::json manifest;
};

// Trains every seed of `config` (after resolving augmentation) without
// touching the filesystem beyond provider caching.
RunResult ExecuteRun(const RunConfig& config);

// ExecuteRun plus artifacts in config.output_dir: seed_<s>.csv,
// checkpoint_seed_<s>.json, augmentation.json and manifest.json.
RunResult TrainToDirectory(const RunConfig& config);

std::string EpisodeCsvName(std::uint64_t seed);

nlohmann::json EvalSummaryToJson(const EvalSummary& summary);

// Greedy evaluation of a saved checkpoint on the config's environment.
EvalSummary EvaluateCheckpoint(const RunConfig& config,
                               const nlohmann::json& checkpoint, int episodes,
                               std::uint64_t seed);

struct OracleReport {
  DpGraph graph;
  DpPlan plan;
  nlohmann::json summary;
};

OracleReport RunOracle(const EnvConfig& env, int grid, int beam_resolution);

struct PlotSeries {
  std::string label;
  std::vector<std::vector<double>> runs;  // one curve per seed
};

inline constexpr int kPlotWindow = 20;

// Trailing moving average; the first window-1 points average what exists.
std::vector<double> MovingAverage(const std::vector<double>& values,
                                  int window);

// Line chart of smoothed curves with the mean over runs as the line and the
// min-max over runs as a band. Output bytes depend only on the inputs.
std::string RenderSvg(const std::vector<PlotSeries>& series,
                      const std::string& title, const std::string& y_label);

// Column "return", "base_return", "sum_secrecy", "reached" (0/1) or "steps".
std::vector<double> CsvColumn(const std::vector<EpisodeRecord>& records,
                              const std::string& metric);

}  // namespace lawnsec

#endif  // LAWNSEC_HARNESS_H_
