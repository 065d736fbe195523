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

#include "lawnsec/env.h"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <random>

#include "lawnsec/errors.h"

namespace lawnsec {
namespace {

enum BaseIndex {
  kAavX,
  kAavY,
  kDestDx,
  kDestDy,
  kDistJam,
  kDistEve,
  kDistBs,
  kCSecPrev,
  kTFrac,
  kNumBase,
};

void RequirePositive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw ConfigError(std::string(what) + " must be > 0");
  }
}

void RequireFinitePose(const Pose& p, const char* what) {
  try {
    p.Validate();
  } catch (const InputError& e) {
    throw ConfigError(std::string(what) + ": " + e.what());
  }
}

bool InsideArea(const Pose& p, const EnvConfig& c) {
  return p.x >= 0.0 && p.x <= c.area_width && p.y >= 0.0 &&
         p.y <= c.area_height;
}

dsl::VarSchema MakeBaseSchema() {
  dsl::VarSchema s;
  for (const auto& name : BaseFeatureNames()) s.AddScalar(name);
  for (const char* name :
       {"aav_z", "dest_x", "dest_y", "bs_x", "bs_y", "bs_z", "jam_x", "jam_y",
        "jam_z", "eve_x", "eve_y", "eve_z", "c_legit_prev", "c_eve_prev"}) {
    s.AddScalar(name);
  }
  for (const char* name :
       {"aav_pos", "dest_pos", "bs_pos", "jam_pos", "eve_pos"}) {
    s.AddVector(name, 3);
  }
  return s;
}

}  // namespace

const std::vector<std::string>& BaseFeatureNames() {
  static const std::vector<std::string> names = {
      "aav_x",    "aav_y",    "dest_dx",    "dest_dy", "dist_jam",
      "dist_eve", "dist_bs",  "c_sec_prev", "t_frac",
  };
  return names;
}

const dsl::VarSchema& BaseSchema() {
  static const dsl::VarSchema schema = MakeBaseSchema();
  return schema;
}

void EnvConfig::Validate() const {
  RequirePositive(area_width, "area_width");
  RequirePositive(area_height, "area_height");
  RequirePositive(v_max, "v_max");
  RequirePositive(dt, "dt");
  RequirePositive(arrival_radius, "arrival_radius");
  if (!(aav_altitude >= 0.0) || !std::isfinite(aav_altitude)) {
    throw ConfigError("aav_altitude must be >= 0");
  }
  if (horizon < 1) throw ConfigError("horizon must be >= 1");
  if (!(start_jitter >= 0.0) || !std::isfinite(start_jitter)) {
    throw ConfigError("start_jitter must be >= 0");
  }
  RequireFinitePose(start, "start");
  RequireFinitePose(destination, "destination");
  RequireFinitePose(bs, "bs");
  RequireFinitePose(jammer, "jammer");
  RequireFinitePose(eve, "eve");
  if (!InsideArea(start, *this) || !InsideArea(destination, *this)) {
    throw ConfigError("start and destination must lie inside the area");
  }
  if (start.x == destination.x && start.y == destination.y) {
    throw ConfigError("start and destination must differ");
  }
  for (double w : {reward.w_sec, reward.w_prog, reward.arrival_bonus}) {
    if (!std::isfinite(w)) throw ConfigError("reward weights must be finite");
  }
  radio.Validate();
}

double EnvConfig::Diagonal() const {
  return std::hypot(area_width, area_height);
}

SecrecyEnv::SecrecyEnv(EnvConfig config) : config_(std::move(config)) {
  config_.Validate();
  if (config_.augmentation) {
    const auto& aug = *config_.augmentation;
    if (static_cast<int>(aug.features.size()) > kMaxAugmentedFeatures) {
      throw ConfigError("too many augmented features");
    }
    auto check = [](const dsl::Expr& e, const std::string& what) {
      const auto issues = dsl::Validate(e, BaseSchema());
      if (!issues.empty()) {
        throw ConfigError(what + ": " + issues.front().message);
      }
    };
    for (const auto& f : aug.features) {
      if (!dsl::IsValidName(f.name) || BaseSchema().Contains(f.name)) {
        throw ConfigError("invalid augmented feature name '" + f.name + "'");
      }
      check(f.expr, "feature " + f.name);
    }
    check(aug.intrinsic.expr, "intrinsic reward");
    if (!(std::abs(aug.intrinsic.weight) <= 1.0)) {
      throw ConfigError("intrinsic weight must lie in [-1, 1]");
    }
  }
}

double SecrecyEnv::HorizontalDistanceToGoal(const Pose& aav) const {
  return std::hypot(config_.destination.x - aav.x,
                    config_.destination.y - aav.y);
}

int SecrecyEnv::ObservationDim() const {
  const int aug = config_.augmentation
                      ? static_cast<int>(config_.augmentation->features.size())
                      : 0;
  return kNumBase + aug;
}

dsl::Binding SecrecyEnv::MakeBinding(const EnvState& state) const {
  const double diag = config_.Diagonal();
  dsl::Binding b;
  const auto& names = BaseFeatureNames();
  for (int i = 0; i < kNumBase; ++i) b.SetScalar(names[i], state.base_features[i]);
  const Pose dest{config_.destination.x, config_.destination.y,
                  config_.aav_altitude};
  auto set_pose = [&](const std::string& prefix, const Pose& p,
                      bool set_xy) {
    if (set_xy) {
      b.SetScalar(prefix + "_x", p.x / diag);
      b.SetScalar(prefix + "_y", p.y / diag);
    }
    b.SetScalar(prefix + "_z", p.z / diag);
    b.SetVector(prefix + "_pos", {p.x / diag, p.y / diag, p.z / diag});
  };
  set_pose("aav", state.aav, false);
  b.SetScalar("dest_x", dest.x / diag);
  b.SetScalar("dest_y", dest.y / diag);
  b.SetVector("dest_pos", {dest.x / diag, dest.y / diag, dest.z / diag});
  set_pose("bs", config_.bs, true);
  set_pose("jam", config_.jammer, true);
  set_pose("eve", config_.eve, true);
  b.SetScalar("c_legit_prev", state.last.c_legit);
  b.SetScalar("c_eve_prev", state.last.c_eve);
  return b;
}

void SecrecyEnv::FillFeatures(EnvState& state) const {
  const double diag = config_.Diagonal();
  state.base_features.assign(kNumBase, 0.0);
  auto& f = state.base_features;
  f[kAavX] = state.aav.x / diag;
  f[kAavY] = state.aav.y / diag;
  f[kDestDx] = (config_.destination.x - state.aav.x) / diag;
  f[kDestDy] = (config_.destination.y - state.aav.y) / diag;
  f[kDistJam] = Distance(state.aav, config_.jammer) / diag;
  f[kDistEve] = Distance(state.aav, config_.eve) / diag;
  f[kDistBs] = Distance(state.aav, config_.bs) / diag;
  f[kCSecPrev] = state.last.c_sec;
  f[kTFrac] = static_cast<double>(state.t) / config_.horizon;

  state.augmented_features.clear();
  if (!config_.augmentation || config_.augmentation->features.empty()) return;
  const dsl::Binding binding = MakeBinding(state);
  for (const auto& feat : config_.augmentation->features) {
    state.augmented_features.push_back(
        dsl::GuardedEval(feat.expr, binding, 0.0, &diagnostics_));
  }
}

EnvState SecrecyEnv::Reset(std::uint64_t seed) const {
  EnvState s;
  s.aav = Pose{config_.start.x, config_.start.y, config_.aav_altitude};
  if (config_.start_jitter > 0.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-config_.start_jitter,
                                             config_.start_jitter);
    s.aav.x = std::clamp(s.aav.x + u(rng), 0.0, config_.area_width);
    s.aav.y = std::clamp(s.aav.y + u(rng), 0.0, config_.area_height);
  }
  FillFeatures(s);
  return s;
}

MappedAction SecrecyEnv::MapAction(std::span<const double> action) const {
  const int m = config_.radio.num_antennas;
  if (static_cast<int>(action.size()) != ActionDim()) {
    throw InputError("action has " + std::to_string(action.size()) +
                     " entries, expected " + std::to_string(ActionDim()));
  }
  for (double a : action) {
    if (!std::isfinite(a)) throw InputError("action must be finite");
  }
  auto box = [](double a) { return std::clamp(a, -1.0, 1.0); };

  MappedAction out;
  out.vx = config_.v_max * box(action[0]);
  out.vy = config_.v_max * box(action[1]);
  const double speed = std::hypot(out.vx, out.vy);
  if (speed > config_.v_max) {
    out.vx *= config_.v_max / speed;
    out.vy *= config_.v_max / speed;
  }

  Eigen::VectorXcd w(m);
  for (int k = 0; k < m; ++k) {
    w[k] = {box(action[2 + 2 * k]), box(action[3 + 2 * k])};
  }
  const double norm = w.norm();
  if (norm < 1e-12) {
    w.setConstant(std::sqrt(config_.radio.p_max / m));
  } else {
    w *= std::sqrt(config_.radio.p_max) / norm;
  }
  out.beam.weights = std::move(w);
  return out;
}

StepResult SecrecyEnv::Step(const EnvState& state,
                            std::span<const double> action) const {
  if (state.terminal) throw UsageError("step called on a terminal state");
  const MappedAction mapped = MapAction(action);

  StepResult r;
  EnvState& next = r.next_state;
  next.aav = state.aav;
  next.aav.x = std::clamp(state.aav.x + mapped.vx * config_.dt, 0.0,
                          config_.area_width);
  next.aav.y = std::clamp(state.aav.y + mapped.vy * config_.dt, 0.0,
                          config_.area_height);
  next.aav.z = config_.aav_altitude;
  next.t = state.t + 1;

  r.rates = StepSecrecy(config_.bs, next.aav, config_.eve, config_.jammer,
                        mapped.beam, config_.radio);
  next.last = r.rates;

  const double d_prev = HorizontalDistanceToGoal(state.aav);
  const double d_cur = HorizontalDistanceToGoal(next.aav);
  const bool reached = d_cur <= config_.arrival_radius;
  const auto& w = config_.reward;
  r.base_reward = w.w_sec * r.rates.c_sec +
                  w.w_prog * (d_prev - d_cur) / (config_.v_max * config_.dt) +
                  (reached ? w.arrival_bonus : 0.0);

  if (reached) {
    r.terminal_reason = TerminalReason::kReached;
  } else if (next.t >= config_.horizon) {
    r.terminal_reason = TerminalReason::kHorizon;
  }
  r.terminal = r.terminal_reason != TerminalReason::kNone;
  next.terminal = r.terminal;

  FillFeatures(next);
  r.reward = r.base_reward;
  // A zero weight skips the term entirely so the trace stays bit-identical
  // to the unaugmented one.
  if (config_.augmentation && config_.augmentation->intrinsic.weight != 0.0) {
    const auto& intrinsic = config_.augmentation->intrinsic;
    r.intrinsic_reward =
        intrinsic.weight * dsl::GuardedEval(intrinsic.expr, MakeBinding(next),
                                            0.0, &diagnostics_);
    r.reward = r.base_reward + r.intrinsic_reward;
  }
  return r;
}

std::vector<double> SecrecyEnv::Observation(const EnvState& state) const {
  std::vector<double> obs = state.base_features;
  obs.insert(obs.end(), state.augmented_features.begin(),
             state.augmented_features.end());
  return obs;
}

EpisodeSummary SummarizeEpisode(std::span<const StepResult> results) {
  if (results.empty()) throw InputError("episode has no steps");
  EpisodeSummary s;
  for (const auto& r : results) {
    s.sum_reward += r.reward;
    s.sum_base_reward += r.base_reward;
    s.sum_secrecy += r.rates.c_sec;
  }
  s.reached = results.back().terminal_reason == TerminalReason::kReached;
  s.steps = static_cast<int>(results.size());
  return s;
}

void WriteTraceCsv(std::ostream& out, std::span<const StepResult> results) {
  out << "t,x,y,c_legit,c_eve,c_sec,reward\n";
  const auto flags = out.flags();
  const auto prec = out.precision();
  out << std::setprecision(17);
  for (const auto& r : results) {
    const auto& s = r.next_state;
    out << s.t << ',' << s.aav.x << ',' << s.aav.y << ',' << r.rates.c_legit
        << ',' << r.rates.c_eve << ',' << r.rates.c_sec << ',' << r.reward
        << '\n';
  }
  out.flags(flags);
  out.precision(prec);
}

}  // namespace lawnsec
