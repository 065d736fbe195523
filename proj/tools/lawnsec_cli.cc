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

// lawnsec: train, evaluate and benchmark secrecy-aware AAV agents.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "lawnsec/errors.h"
#include "lawnsec/harness.h"

namespace {

using nlohmann::json;
namespace fs = std::filesystem;
using namespace lawnsec;

void WriteFile(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
}

json ReadJson(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("cannot parse '" + path + "': " + e.what());
  }
}

RunConfig Load(const std::string& path, const std::optional<std::uint64_t>& seed,
               const std::string& out) {
  RunConfig config = LoadRunConfig(path);
  if (seed) config.seeds = {*seed};
  if (!out.empty()) config.output_dir = out;
  config.Validate();
  return config;
}

int Train(const std::string& config_path,
          const std::optional<std::uint64_t>& seed, const std::string& out) {
  const RunConfig config = Load(config_path, seed, out);
  const RunResult result = TrainToDirectory(config);
  for (const auto& d : result.augmentation.diagnostics) {
    std::cerr << "augmentation: " << d << "\n";
  }
  for (const SeedRun& run : result.seeds) {
    std::cout << "seed " << run.seed << ": eval return "
              << run.eval.mean_return << ", sum secrecy "
              << run.eval.mean_sum_secrecy << ", arrival "
              << run.eval.arrival_rate << "\n";
  }
  std::cout << "wrote " << config.output_dir << "/manifest.json\n";
  return kExitOk;
}

int Evaluate(const std::string& config_path, const std::string& checkpoint,
             int episodes, std::uint64_t seed, const std::string& out) {
  const RunConfig config = LoadRunConfig(config_path);
  const EvalSummary summary =
      EvaluateCheckpoint(config, ReadJson(checkpoint), episodes, seed);
  const std::string text = EvalSummaryToJson(summary).dump(2) + "\n";
  if (out.empty()) {
    std::cout << text;
  } else {
    WriteFile(out, text);
  }
  return kExitOk;
}

int Oracle(const std::string& config_path, int grid, int resolution,
           const std::string& out) {
  const RunConfig config = LoadRunConfig(config_path);
  const OracleReport report = RunOracle(config.env, grid, resolution);
  const fs::path dir(out.empty() ? config.output_dir : out);
  std::ostringstream heat;
  WriteHeatmapCsv(heat, report.graph, config.env.aav_altitude);
  WriteFile(dir / "heatmap.csv", heat.str());
  WriteFile(dir / "oracle.json", report.summary.dump(2) + "\n");
  std::cout << "DP benchmark value " << report.plan.total_secrecy
            << " (grid " << grid << ")\n";
  return kExitOk;
}

int Plot(const std::vector<std::string>& specs, const std::string& metric,
         const std::string& title, const std::string& out) {
  std::vector<PlotSeries> series;
  for (const std::string& spec : specs) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw ConfigError("--series expects LABEL=CSV[,CSV...], got '" + spec +
                        "'");
    }
    PlotSeries s{spec.substr(0, eq), {}};
    std::stringstream paths(spec.substr(eq + 1));
    for (std::string path; std::getline(paths, path, ',');) {
      std::ifstream in(path);
      if (!in) throw ConfigError("cannot read '" + path + "'");
      s.runs.push_back(CsvColumn(ReadEpisodeCsv(in), metric));
    }
    series.push_back(std::move(s));
  }
  const std::string y_label =
      metric == "sum_secrecy" ? "Sum secrecy rate (bits/s/Hz)" : "Episode return";
  WriteFile(out, RenderSvg(series, title, y_label));
  return kExitOk;
}

int Augment(const std::string& config_path, const std::string& out) {
  const RunConfig config = LoadRunConfig(config_path);
  const fs::path dir(out.empty() ? config.output_dir : out);
  const PromptBundle prompt = BuildPrompt(config.env, BaseSchema());
  WriteFile(dir / "prompt.txt",
            "# system\n" + prompt.system + "\n# user\n" + prompt.user);
  const ResolvedAugmentation aug = ResolveAugmentation(config);
  if (!aug.reply.empty()) WriteFile(dir / "reply.txt", aug.reply);
  for (const auto& d : aug.diagnostics) std::cerr << "augmentation: " << d << "\n";
  if (!aug.spec) {
    std::cout << "augmentation is off; wrote prompt only\n";
    return kExitOk;
  }
  WriteFile(dir / "augmentation.json",
            AugmentationToJson(*aug.spec).dump(2) + "\n");
  std::cout << aug.spec->features.size() << " feature(s), intrinsic weight "
            << aug.spec->intrinsic.weight << "; wrote "
            << (dir / "augmentation.json").string() << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Secrecy-aware AAV trajectory and beamforming experiments"};
  app.require_subcommand(1);
  app.set_version_flag("--version", lawnsec::kVersion);

  std::string config_path, out, checkpoint, metric = "return";
  std::string title = "Episode return (moving average, window 20)";
  std::optional<std::uint64_t> seed;
  std::uint64_t eval_seed = 12345;
  int episodes = 20, grid = 10, resolution = 64;
  std::vector<std::string> series;

  auto* train = app.add_subcommand("train", "Train agents for every seed");
  train->add_option("--config", config_path, "Run config JSON")->required();
  train->add_option("--seed", seed, "Train only this master seed");
  train->add_option("--out", out, "Output directory");

  auto* evaluate = app.add_subcommand("evaluate", "Greedy checkpoint rollouts");
  evaluate->add_option("--config", config_path, "Run config JSON")->required();
  evaluate->add_option("--checkpoint", checkpoint, "Checkpoint JSON")
      ->required();
  evaluate->add_option("--episodes", episodes, "Evaluation episodes");
  evaluate->add_option("--seed", eval_seed, "Reset seed of the first episode");
  evaluate->add_option("--out", out, "Summary JSON path (default stdout)");

  auto* oracle = app.add_subcommand("oracle", "Heatmap and DP benchmark");
  oracle->add_option("--config", config_path, "Run config JSON")->required();
  oracle->add_option("--grid", grid, "DP grid cells per side");
  oracle->add_option("--resolution", resolution, "Beam search resolution");
  oracle->add_option("--out", out, "Output directory");

  auto* plot = app.add_subcommand("plot", "SVG learning curves");
  plot->add_option("--series", series, "LABEL=CSV[,CSV...] (one per curve)")
      ->required();
  plot->add_option("--metric", metric, "return, base_return or sum_secrecy");
  plot->add_option("--title", title, "Chart title");
  plot->add_option("--out", out, "SVG path")->required();

  auto* augment = app.add_subcommand("augment", "Request and validate an "
                                                "augmentation");
  augment->add_option("--config", config_path, "Run config JSON")->required();
  augment->add_option("--out", out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*train) return Train(config_path, seed, out);
    if (*evaluate) return Evaluate(config_path, checkpoint, episodes, eval_seed, out);
    if (*oracle) return Oracle(config_path, grid, resolution, out);
    if (*plot) return Plot(series, metric, title, out);
    if (*augment) return Augment(config_path, out);
  } catch (const ProviderError& e) {
    std::cerr << "provider error: " << e.what() << "\n";
    return kExitProvider;
  } catch (const AugmentationError& e) {
    std::cerr << "augmentation error: " << e.what() << "\n";
    return kExitProvider;
  } catch (const TrainingError& e) {
    std::cerr << "training diverged: " << e.what() << "\n";
    return kExitDivergence;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitOk;
}
