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

#include "lawnsec/radio.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "lawnsec/errors.h"

namespace lawnsec {
namespace {

void RequireFinite(double v, const char* what) {
  if (!std::isfinite(v)) {
    throw InputError(std::string(what) + " must be finite");
  }
}

}  // namespace

void Pose::Validate() const {
  RequireFinite(x, "pose.x");
  RequireFinite(y, "pose.y");
  RequireFinite(z, "pose.z");
  if (z < 0.0) throw InputError("pose.z must be >= 0");
}

double Distance(const Pose& a, const Pose& b) {
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  const double dz = b.z - a.z;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

void RadioParams::Validate() const {
  if (num_antennas < 1) throw ConfigError("radio.num_antennas must be >= 1");
  if (!(p_max > 0.0) || !std::isfinite(p_max)) {
    throw ConfigError("radio.p_max must be > 0");
  }
  if (!(g0 > 0.0) || !std::isfinite(g0)) {
    throw ConfigError("radio.g0 must be > 0");
  }
  if (!(noise_power > 0.0) || !std::isfinite(noise_power)) {
    throw ConfigError("radio.noise_power must be > 0");
  }
  if (!(jammer_power >= 0.0) || !std::isfinite(jammer_power)) {
    throw ConfigError("radio.jammer_power must be >= 0");
  }
  if (!(d_min > 0.0) || !std::isfinite(d_min)) {
    throw ConfigError("radio.d_min must be > 0");
  }
}

double PathGain(double distance, const RadioParams& params) {
  RequireFinite(distance, "distance");
  if (distance < 0.0) throw InputError("distance must be >= 0");
  const double d = std::max(distance, params.d_min);
  return params.g0 / (d * d);
}

Eigen::VectorXcd SteeringVector(int num_antennas, double cos_phi) {
  if (num_antennas < 1) throw InputError("num_antennas must be >= 1");
  if (!(std::abs(cos_phi) <= 1.0)) {
    throw InputError("|cos_phi| must be <= 1");
  }
  Eigen::VectorXcd a(num_antennas);
  for (int k = 0; k < num_antennas; ++k) {
    a[k] = std::polar(1.0, std::numbers::pi * k * cos_phi);
  }
  return a;
}

double ArrayCosine(const Pose& tx, const Pose& rx) {
  const double d = Distance(tx, rx);
  if (d == 0.0) return 0.0;
  return std::clamp((rx.x - tx.x) / d, -1.0, 1.0);
}

ChannelVector LosChannel(const Pose& tx, const Pose& rx,
                         const RadioParams& params) {
  tx.Validate();
  rx.Validate();
  const double gain = PathGain(Distance(tx, rx), params);
  return ChannelVector{std::sqrt(gain) *
                       SteeringVector(params.num_antennas, ArrayCosine(tx, rx))};
}

double ReceivedSignalPower(const ChannelVector& h, const Beamformer& w) {
  if (h.size() != w.size()) {
    throw InputError("channel/beamformer dimension mismatch");
  }
  // Eigen's complex dot conjugates the left operand: h^H w.
  return std::norm(h.entries.dot(w.weights));
}

double Capacity(double signal, double interference, double noise) {
  if (!(noise > 0.0)) throw InputError("noise must be > 0");
  if (!(signal >= 0.0) || !(interference >= 0.0)) {
    throw InputError("signal and interference must be >= 0");
  }
  return std::log2(1.0 + signal / (interference + noise));
}

double SecrecyRate(double c_legit, double c_eve) {
  return std::max(0.0, c_legit - c_eve);
}

WiretapLinks MakeLinks(const Pose& bs, const Pose& aav, const Pose& eve,
                       const Pose& jammer, const RadioParams& params) {
  jammer.Validate();
  WiretapLinks links;
  links.legit = LosChannel(bs, aav, params);
  links.eve = LosChannel(bs, eve, params);
  links.jam_legit = params.jammer_power * PathGain(Distance(aav, jammer), params);
  links.jam_eve = params.jammer_power * PathGain(Distance(eve, jammer), params);
  return links;
}

SecrecyBreakdown SecrecyFromLinks(const WiretapLinks& links,
                                  const Beamformer& w,
                                  const RadioParams& params) {
  if (w.Power() > params.p_max + 1e-9) {
    throw InputError("beamformer exceeds the power budget");
  }
  SecrecyBreakdown out;
  out.c_legit = Capacity(ReceivedSignalPower(links.legit, w), links.jam_legit,
                         params.noise_power);
  out.c_eve = Capacity(ReceivedSignalPower(links.eve, w), links.jam_eve,
                       params.noise_power);
  out.c_sec = SecrecyRate(out.c_legit, out.c_eve);
  return out;
}

SecrecyBreakdown StepSecrecy(const Pose& bs, const Pose& aav, const Pose& eve,
                             const Pose& jammer, const Beamformer& w,
                             const RadioParams& params) {
  return SecrecyFromLinks(MakeLinks(bs, aav, eve, jammer, params), w, params);
}

}  // namespace lawnsec
