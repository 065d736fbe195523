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

#include "lawnsec/harness.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include "lawnsec/errors.h"
#include "lawnsec/seeding.h"

namespace lawnsec {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

void CheckKeys(const json& j, const std::set<std::string>& allowed,
               const std::string& context) {
  if (!j.is_object()) throw ConfigError(context + " must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) {
      throw ConfigError("unknown key '" + key + "' in " + context);
    }
  }
}

json PoseToJson(const Pose& p) { return json::array({p.x, p.y, p.z}); }

Pose PoseFromJson(const json& j, const std::string& context) {
  if (!j.is_array() || j.size() != 3) {
    throw ConfigError(context + " must be [x, y, z]");
  }
  Pose p{j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
  try {
    p.Validate();
  } catch (const InputError& e) {
    throw ConfigError(context + ": " + e.what());
  }
  return p;
}

template <typename T>
void Read(const json& j, const char* key, T& field) {
  if (j.contains(key)) field = j.at(key).get<T>();
}

const char* ModeName(AugmentationMode m) {
  switch (m) {
    case AugmentationMode::kOff: return "off";
    case AugmentationMode::kMock: return "mock";
    case AugmentationMode::kRemote: return "remote";
    case AugmentationMode::kFile: return "file";
    case AugmentationMode::kInline: return "inline";
  }
  return "off";
}

AugmentationMode ParseMode(const std::string& s) {
  if (s == "off") return AugmentationMode::kOff;
  if (s == "mock") return AugmentationMode::kMock;
  if (s == "remote") return AugmentationMode::kRemote;
  if (s == "file") return AugmentationMode::kFile;
  if (s == "inline") return AugmentationMode::kInline;
  throw ConfigError("augmentation.mode must be off, mock, remote, file or "
                    "inline (got '" + s + "')");
}

std::string Resolve(const std::string& path, const std::string& base_dir) {
  if (path.empty() || base_dir.empty() || fs::path(path).is_absolute()) {
    return path;
  }
  return (fs::path(base_dir) / path).lexically_normal().string();
}

std::string ReadText(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteText(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
}

std::string Fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string XmlEscape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

double NiceStep(double range) {
  const double raw = range / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double f = raw / mag;
  const double nice = f < 1.5 ? 1.0 : f < 3.0 ? 2.0 : f < 7.0 ? 5.0 : 10.0;
  return nice * mag;
}

}  // namespace

json EnvConfigToJson(const EnvConfig& c) {
  return json{
      {"area_width", c.area_width},
      {"area_height", c.area_height},
      {"start", PoseToJson(c.start)},
      {"destination", PoseToJson(c.destination)},
      {"bs", PoseToJson(c.bs)},
      {"jammer", PoseToJson(c.jammer)},
      {"eve", PoseToJson(c.eve)},
      {"aav_altitude", c.aav_altitude},
      {"v_max", c.v_max},
      {"dt", c.dt},
      {"horizon", c.horizon},
      {"arrival_radius", c.arrival_radius},
      {"start_jitter", c.start_jitter},
      {"reward",
       {{"w_sec", c.reward.w_sec},
        {"w_prog", c.reward.w_prog},
        {"arrival_bonus", c.reward.arrival_bonus}}},
      {"radio",
       {{"num_antennas", c.radio.num_antennas},
        {"p_max", c.radio.p_max},
        {"g0", c.radio.g0},
        {"noise_power", c.radio.noise_power},
        {"jammer_power", c.radio.jammer_power},
        {"d_min", c.radio.d_min}}},
  };
}

EnvConfig EnvConfigFromJson(const json& j) {
  EnvConfig c;
  try {
    CheckKeys(j,
              {"area_width", "area_height", "start", "destination", "bs",
               "jammer", "eve", "aav_altitude", "v_max", "dt", "horizon",
               "arrival_radius", "start_jitter", "reward", "radio"},
              "env");
    Read(j, "area_width", c.area_width);
    Read(j, "area_height", c.area_height);
    if (j.contains("start")) c.start = PoseFromJson(j["start"], "env.start");
    if (j.contains("destination")) {
      c.destination = PoseFromJson(j["destination"], "env.destination");
    }
    if (j.contains("bs")) c.bs = PoseFromJson(j["bs"], "env.bs");
    if (j.contains("jammer")) c.jammer = PoseFromJson(j["jammer"], "env.jammer");
    if (j.contains("eve")) c.eve = PoseFromJson(j["eve"], "env.eve");
    Read(j, "aav_altitude", c.aav_altitude);
    Read(j, "v_max", c.v_max);
    Read(j, "dt", c.dt);
    Read(j, "horizon", c.horizon);
    Read(j, "arrival_radius", c.arrival_radius);
    Read(j, "start_jitter", c.start_jitter);
    if (j.contains("reward")) {
      const json& r = j["reward"];
      CheckKeys(r, {"w_sec", "w_prog", "arrival_bonus"}, "env.reward");
      Read(r, "w_sec", c.reward.w_sec);
      Read(r, "w_prog", c.reward.w_prog);
      Read(r, "arrival_bonus", c.reward.arrival_bonus);
    }
    if (j.contains("radio")) {
      const json& r = j["radio"];
      CheckKeys(r,
                {"num_antennas", "p_max", "g0", "noise_power", "jammer_power",
                 "d_min"},
                "env.radio");
      Read(r, "num_antennas", c.radio.num_antennas);
      Read(r, "p_max", c.radio.p_max);
      Read(r, "g0", c.radio.g0);
      Read(r, "noise_power", c.radio.noise_power);
      Read(r, "jammer_power", c.radio.jammer_power);
      Read(r, "d_min", c.radio.d_min);
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("env config: ") + e.what());
  }
  c.Validate();
  return c;
}

void RunConfig::Validate() const {
  env.Validate();
  agent.Validate();
  if (episodes < 1) throw ConfigError("episodes must be >= 1");
  if (seeds.empty()) throw ConfigError("seeds must be non-empty");
  if (std::set<std::uint64_t>(seeds.begin(), seeds.end()).size() !=
      seeds.size()) {
    throw ConfigError("seeds must be distinct");
  }
  if (update_every < 1) throw ConfigError("update_every must be >= 1");
  if (eval_episodes < 1) throw ConfigError("eval_episodes must be >= 1");
  if (workers < 1) throw ConfigError("workers must be >= 1");
  if (output_dir.empty()) throw ConfigError("output_dir must be set");
  switch (augmentation.mode) {
    case AugmentationMode::kMock: {
      ProviderConfig p = provider;
      p.mode = ProviderMode::kMock;
      p.Validate();
      break;
    }
    case AugmentationMode::kRemote: {
      ProviderConfig p = provider;
      p.mode = ProviderMode::kRemote;
      p.Validate();
      break;
    }
    case AugmentationMode::kFile:
      if (augmentation.path.empty()) {
        throw ConfigError("augmentation.path is required in file mode");
      }
      break;
    case AugmentationMode::kInline:
      if (!augmentation.spec.is_object()) {
        throw ConfigError("augmentation.spec must be an object in inline mode");
      }
      break;
    case AugmentationMode::kOff:
      break;
  }
}

json RunConfigToJson(const RunConfig& c) {
  json aug = {{"mode", ModeName(c.augmentation.mode)}};
  if (c.augmentation.mode == AugmentationMode::kFile) {
    aug["path"] = c.augmentation.path;
  }
  if (c.augmentation.mode == AugmentationMode::kInline) {
    aug["spec"] = c.augmentation.spec;
  }
  json provider = ProviderConfigToJson(c.provider);
  provider.erase("mode");
  return json{
      {"env", EnvConfigToJson(c.env)},
      {"agent", AgentConfigToJson(c.agent)},
      {"provider", provider},
      {"augmentation", aug},
      {"episodes", c.episodes},
      {"seeds", c.seeds},
      {"update_every", c.update_every},
      {"eval_episodes", c.eval_episodes},
      {"workers", c.workers},
      {"output_dir", c.output_dir},
  };
}

RunConfig RunConfigFromJson(const json& j, const std::string& base_dir) {
  RunConfig c;
  try {
    CheckKeys(j,
              {"env", "agent", "provider", "augmentation", "episodes", "seeds",
               "update_every", "eval_episodes", "workers", "output_dir"},
              "run config");
    if (j.contains("env")) c.env = EnvConfigFromJson(j["env"]);
    if (j.contains("agent")) c.agent = AgentConfigFromJson(j["agent"]);
    if (j.contains("provider")) {
      c.provider = ProviderConfigFromJson(j["provider"]);
      c.provider.fixture_path = Resolve(c.provider.fixture_path, base_dir);
    }
    if (j.contains("augmentation")) {
      const json& a = j["augmentation"];
      CheckKeys(a, {"mode", "path", "spec"}, "augmentation");
      c.augmentation.mode = ParseMode(a.value("mode", std::string("off")));
      c.augmentation.path = Resolve(a.value("path", std::string()), base_dir);
      if (a.contains("spec")) c.augmentation.spec = a["spec"];
    }
    Read(j, "episodes", c.episodes);
    Read(j, "seeds", c.seeds);
    Read(j, "update_every", c.update_every);
    Read(j, "eval_episodes", c.eval_episodes);
    Read(j, "workers", c.workers);
    Read(j, "output_dir", c.output_dir);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("run config: ") + e.what());
  }
  c.Validate();
  return c;
}

RunConfig LoadRunConfig(const std::string& path) {
  json j;
  try {
    j = json::parse(ReadText(path));
  } catch (const json::exception& e) {
    throw ConfigError("cannot parse '" + path + "': " + e.what());
  }
  const std::string base = fs::path(path).parent_path().string();
  if (j.is_object() && j.value("format", std::string()) == kManifestFormat) {
    if (!j.contains("replay_config")) {
      throw ConfigError("manifest '" + path + "' has no replay_config");
    }
    return RunConfigFromJson(j["replay_config"], base);
  }
  return RunConfigFromJson(j, base);
}

ResolvedAugmentation ResolveAugmentation(const RunConfig& config) {
  ResolvedAugmentation out;
  const dsl::VarSchema& schema = BaseSchema();
  switch (config.augmentation.mode) {
    case AugmentationMode::kOff:
      return out;
    case AugmentationMode::kInline:
      out.spec = ParseAugmentation(config.augmentation.spec.dump(), schema,
                                   &out.diagnostics);
      return out;
    case AugmentationMode::kFile:
      try {
        out.reply = ReadText(config.augmentation.path);
      } catch (const ConfigError& e) {
        throw AugmentationError(e.what());
      }
      break;
    case AugmentationMode::kMock:
    case AugmentationMode::kRemote: {
      ProviderConfig provider = config.provider;
      provider.mode = config.augmentation.mode == AugmentationMode::kMock
                          ? ProviderMode::kMock
                          : ProviderMode::kRemote;
      out.reply = RequestAugmentation(BuildPrompt(config.env, schema),
                                      provider, &out.stats);
      break;
    }
  }
  out.spec = ParseAugmentation(out.reply, schema, &out.diagnostics);
  return out;
}

std::string EpisodeCsvName(std::uint64_t seed) {
  return "seed_" + std::to_string(seed) + ".csv";
}

json EvalSummaryToJson(const EvalSummary& s) {
  return json{
      {"episodes", s.episodes},
      {"mean_return", s.mean_return},
      {"std_return", s.std_return},
      {"mean_base_return", s.mean_base_return},
      {"mean_sum_secrecy", s.mean_sum_secrecy},
      {"arrival_rate", s.arrival_rate},
      {"mean_steps", s.mean_steps},
  };
}

RunResult ExecuteRun(const RunConfig& config) {
  config.Validate();
  RunResult result;
  result.augmentation = ResolveAugmentation(config);
  EnvConfig env_config = config.env;
  env_config.augmentation = result.augmentation.spec;
  const SecrecyEnv env(env_config);

  TrainOptions options;
  options.episodes = config.episodes;
  options.update_every = config.update_every;

  const std::size_t n = config.seeds.size();
  result.seeds.resize(n);
  std::vector<std::exception_ptr> errors(n);
  std::vector<long> env_steps(n, 0);
  std::vector<long> updates(n, 0);
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        const std::uint64_t seed = config.seeds[i];
        TrainResult tr = TrainSeed(env, config.agent, options, seed);
        SeedRun& run = result.seeds[i];
        run.seed = seed;
        run.episodes = std::move(tr.episodes);
        run.checkpoint = MakeCheckpoint(*tr.agent);
        // Evaluation resets continue past the training episode indices.
        run.eval = EvaluatePolicy(
            env, *tr.agent, config.eval_episodes,
            DeriveSeed(seed, Stream::kEnv) + config.episodes);
        env_steps[i] = tr.env_steps;
        updates[i] = tr.updates;
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int threads =
      std::min<int>(config.workers, static_cast<int>(n));
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  RunConfig replay = config;
  if (result.augmentation.spec) {
    replay.augmentation = {AugmentationMode::kInline, "",
                           AugmentationToJson(*result.augmentation.spec)};
  } else {
    replay.augmentation = {};
  }
  json seeds = json::array();
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint64_t s = config.seeds[i];
    seeds.push_back({
        {"seed", s},
        {"streams",
         {{"env", DeriveSeed(s, Stream::kEnv)},
          {"agent_init", DeriveSeed(s, Stream::kAgentInit)},
          {"exploration", DeriveSeed(s, Stream::kExploration)},
          {"buffer_sampling", DeriveSeed(s, Stream::kBufferSampling)},
          {"agent_noise", DeriveSeed(s, Stream::kAgentNoise)}}},
        {"csv", EpisodeCsvName(s)},
        {"checkpoint", "checkpoint_seed_" + std::to_string(s) + ".json"},
        {"env_steps", env_steps[i]},
        {"updates", updates[i]},
        {"eval", EvalSummaryToJson(result.seeds[i].eval)},
    });
  }
  result.manifest = json{
      {"format", kManifestFormat},
      {"version", 1},
      {"lawnsec_version", kVersion},
      {"csv_schema_version", kCsvSchemaVersion},
      {"prompt_template_version", kPromptTemplateVersion},
      {"config", RunConfigToJson(config)},
      {"replay_config", RunConfigToJson(replay)},
      {"augmentation",
       result.augmentation.spec ? AugmentationToJson(*result.augmentation.spec)
                                : json(nullptr)},
      {"augmentation_diagnostics", result.augmentation.diagnostics},
      {"provider",
       {{"cache_hit", result.augmentation.stats.cache_hit},
        {"network_attempts", result.augmentation.stats.network_attempts}}},
      {"seeds", seeds},
  };
  return result;
}

RunResult TrainToDirectory(const RunConfig& config) {
  config.Validate();
  const fs::path dir(config.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output dir '" + dir.string() + "'");
  RunResult result = ExecuteRun(config);
  for (const SeedRun& run : result.seeds) {
    std::ostringstream csv;
    WriteEpisodeCsv(csv, run.episodes);
    WriteText(dir / EpisodeCsvName(run.seed), csv.str());
    WriteText(dir / ("checkpoint_seed_" + std::to_string(run.seed) + ".json"),
              run.checkpoint.dump());
  }
  if (result.augmentation.spec) {
    WriteText(dir / "augmentation.json",
              AugmentationToJson(*result.augmentation.spec).dump(2) + "\n");
  }
  WriteText(dir / "manifest.json", result.manifest.dump(2) + "\n");
  return result;
}

EvalSummary EvaluateCheckpoint(const RunConfig& config,
                               const json& checkpoint, int episodes,
                               std::uint64_t seed) {
  if (episodes < 1) throw ConfigError("episodes must be >= 1");
  const ResolvedAugmentation aug = ResolveAugmentation(config);
  EnvConfig env_config = config.env;
  env_config.augmentation = aug.spec;
  const SecrecyEnv env(env_config);
  const auto agent = LoadCheckpoint(checkpoint);
  if (agent->obs_dim() != env.ObservationDim() ||
      agent->act_dim() != env.config().ActionDim()) {
    throw ConfigError("checkpoint dimensions (obs " +
                      std::to_string(agent->obs_dim()) + ", act " +
                      std::to_string(agent->act_dim()) +
                      ") do not match the configured environment (obs " +
                      std::to_string(env.ObservationDim()) + ", act " +
                      std::to_string(env.config().ActionDim()) + ")");
  }
  return EvaluatePolicy(env, *agent, episodes, seed);
}

OracleReport RunOracle(const EnvConfig& env, int grid, int beam_resolution) {
  OracleReport report;
  report.graph = BuildDpGraph(env, grid, beam_resolution);
  report.plan = SolveDp(report.graph);
  const auto& cells = report.plan.cell_c_sec;
  const auto best = std::max_element(cells.begin(), cells.end());
  json path = json::array();
  for (std::size_t i = 0; i < report.plan.path_cells.size(); ++i) {
    const int cell = report.plan.path_cells[i];
    path.push_back({{"row", cell / grid},
                    {"col", cell % grid},
                    {"t", report.plan.path_times[i]}});
  }
  report.summary = json{
      {"grid", grid},
      {"beam_resolution", beam_resolution},
      {"horizon", env.horizon},
      {"dp_value", report.plan.total_secrecy},
      {"max_cell_c_sec", *best},
      {"min_cell_c_sec", *std::min_element(cells.begin(), cells.end())},
      {"path", path},
  };
  return report;
}

std::vector<double> MovingAverage(const std::vector<double>& values,
                                  int window) {
  if (window < 1) throw InputError("moving-average window must be >= 1");
  std::vector<double> out(values.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    sum += values[i];
    if (i >= static_cast<std::size_t>(window)) sum -= values[i - window];
    const std::size_t count = std::min<std::size_t>(i + 1, window);
    out[i] = sum / static_cast<double>(count);
  }
  return out;
}

std::vector<double> CsvColumn(const std::vector<EpisodeRecord>& records,
                              const std::string& metric) {
  std::vector<double> out;
  out.reserve(records.size());
  for (const auto& r : records) {
    if (metric == "return") {
      out.push_back(r.episode_return);
    } else if (metric == "base_return") {
      out.push_back(r.base_return);
    } else if (metric == "sum_secrecy") {
      out.push_back(r.sum_secrecy);
    } else if (metric == "reached") {
      out.push_back(r.reached ? 1.0 : 0.0);
    } else if (metric == "steps") {
      out.push_back(r.steps);
    } else {
      throw InputError("unknown metric '" + metric + "'");
    }
  }
  return out;
}

std::string RenderSvg(const std::vector<PlotSeries>& series,
                      const std::string& title, const std::string& y_label) {
  static const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                  "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};
  constexpr double kW = 800, kH = 480, kL = 70, kR = 20, kT = 40, kB = 50;
  if (series.empty()) throw InputError("nothing to plot");

  struct Curve {
    std::vector<double> mean, lo, hi;
  };
  std::vector<Curve> curves;
  double y_min = INFINITY, y_max = -INFINITY;
  std::size_t x_len = 0;
  for (const auto& s : series) {
    if (s.runs.empty()) throw InputError("series '" + s.label + "' is empty");
    std::size_t n = s.runs.front().size();
    std::vector<std::vector<double>> smooth;
    for (const auto& run : s.runs) {
      n = std::min(n, run.size());
      smooth.push_back(MovingAverage(run, kPlotWindow));
    }
    if (n == 0) throw InputError("series '" + s.label + "' has no episodes");
    Curve c;
    for (std::size_t i = 0; i < n; ++i) {
      double sum = 0.0, lo = INFINITY, hi = -INFINITY;
      for (const auto& r : smooth) {
        sum += r[i];
        lo = std::min(lo, r[i]);
        hi = std::max(hi, r[i]);
      }
      c.mean.push_back(sum / static_cast<double>(smooth.size()));
      c.lo.push_back(lo);
      c.hi.push_back(hi);
      y_min = std::min(y_min, lo);
      y_max = std::max(y_max, hi);
    }
    x_len = std::max(x_len, n);
    curves.push_back(std::move(c));
  }
  if (!std::isfinite(y_min) || !std::isfinite(y_max)) {
    throw InputError("non-finite values in plot input");
  }
  if (y_max - y_min < 1e-9) {
    y_min -= 1.0;
    y_max += 1.0;
  }
  const double y_step = NiceStep(y_max - y_min);
  y_min = std::floor(y_min / y_step) * y_step;
  y_max = std::ceil(y_max / y_step) * y_step;
  const double x_max = std::max<double>(1.0, static_cast<double>(x_len - 1));
  const double x_step = NiceStep(x_max);

  const double pw = kW - kL - kR, ph = kH - kT - kB;
  auto px = [&](double x) { return kL + pw * x / x_max; };
  auto py = [&](double y) { return kT + ph * (y_max - y) / (y_max - y_min); };

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW
    << "\" height=\"" << kH << "\" viewBox=\"0 0 " << kW << " " << kH
    << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << Fmt(kW / 2) << "\" y=\"24\" text-anchor=\"middle\" "
       "font-size=\"15\">"
    << XmlEscape(title) << "</text>\n";
  for (double y = y_min; y <= y_max + 1e-9 * y_step; y += y_step) {
    o << "<line x1=\"" << Fmt(kL) << "\" y1=\"" << Fmt(py(y)) << "\" x2=\""
      << Fmt(kL + pw) << "\" y2=\"" << Fmt(py(y))
      << "\" stroke=\"#e0e0e0\"/>\n";
    char label[32];
    std::snprintf(label, sizeof(label), "%g", std::abs(y) < 1e-12 ? 0.0 : y);
    o << "<text x=\"" << Fmt(kL - 6) << "\" y=\"" << Fmt(py(y) + 4)
      << "\" text-anchor=\"end\">" << label << "</text>\n";
  }
  for (double x = 0; x <= x_max + 1e-9; x += x_step) {
    char label[32];
    std::snprintf(label, sizeof(label), "%g", x);
    o << "<line x1=\"" << Fmt(px(x)) << "\" y1=\"" << Fmt(kT + ph)
      << "\" x2=\"" << Fmt(px(x)) << "\" y2=\"" << Fmt(kT + ph + 5)
      << "\" stroke=\"black\"/>\n";
    o << "<text x=\"" << Fmt(px(x)) << "\" y=\"" << Fmt(kT + ph + 18)
      << "\" text-anchor=\"middle\">" << label << "</text>\n";
  }
  o << "<rect x=\"" << Fmt(kL) << "\" y=\"" << Fmt(kT) << "\" width=\""
    << Fmt(pw) << "\" height=\"" << Fmt(ph)
    << "\" fill=\"none\" stroke=\"black\"/>\n";
  o << "<text x=\"" << Fmt(kL + pw / 2) << "\" y=\"" << Fmt(kH - 10)
    << "\" text-anchor=\"middle\">Episode</text>\n";
  o << "<text transform=\"translate(16 " << Fmt(kT + ph / 2)
    << ") rotate(-90)\" text-anchor=\"middle\">" << XmlEscape(y_label)
    << "</text>\n";

  for (std::size_t s = 0; s < curves.size(); ++s) {
    const Curve& c = curves[s];
    const char* color = kColors[s % std::size(kColors)];
    o << "<polygon fill=\"" << color << "\" fill-opacity=\"0.2\" "
         "stroke=\"none\" points=\"";
    for (std::size_t i = 0; i < c.hi.size(); ++i) {
      o << Fmt(px(i)) << "," << Fmt(py(c.hi[i])) << " ";
    }
    for (std::size_t i = c.lo.size(); i-- > 0;) {
      o << Fmt(px(i)) << "," << Fmt(py(c.lo[i])) << (i ? " " : "");
    }
    o << "\"/>\n";
    o << "<polyline fill=\"none\" stroke=\"" << color
      << "\" stroke-width=\"1.8\" points=\"";
    for (std::size_t i = 0; i < c.mean.size(); ++i) {
      o << (i ? " " : "") << Fmt(px(i)) << "," << Fmt(py(c.mean[i]));
    }
    o << "\"/>\n";
  }
  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = kColors[s % std::size(kColors)];
    const double y = kT + 16 + 18.0 * static_cast<double>(s);
    o << "<line x1=\"" << Fmt(kL + 12) << "\" y1=\"" << Fmt(y) << "\" x2=\""
      << Fmt(kL + 36) << "\" y2=\"" << Fmt(y) << "\" stroke=\"" << color
      << "\" stroke-width=\"3\"/>\n";
    o << "<text x=\"" << Fmt(kL + 42) << "\" y=\"" << Fmt(y + 4) << "\">"
      << XmlEscape(series[s].label) << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

}  // namespace lawnsec
