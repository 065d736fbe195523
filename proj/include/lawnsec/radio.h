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

// Line-of-sight MISO wiretap physics: free-space path gain, half-wavelength
// ULA steering, beamformed received power, Shannon capacity and the
// per-step secrecy rate seen by the legitimate AAV against an eavesdropper
// while a ground jammer interferes with both receivers.
//
// The ULA lies along +x at the base station. All functions are pure.

#ifndef LAWNSEC_RADIO_H_
#define LAWNSEC_RADIO_H_

#include <Eigen/Core>

namespace lawnsec {

struct Pose {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  // Throws InputError unless all coordinates are finite and z >= 0.
  void Validate() const;
  bool operator==(const Pose&) const = default;
};

double Distance(const Pose& a, const Pose& b);

struct RadioParams {
  int num_antennas = 4;
  double p_max = 120.0;          // W
  double g0 = 1e-3;              // linear gain at 1 m
  double noise_power = 1e-9;     // W
  double jammer_power = 1.0;     // W
  double d_min = 1.0;            // m, distance clamp floor

  void Validate() const;
  bool operator==(const RadioParams&) const = default;
};

// Complex M-vector h of one transmitter -> receiver link.
struct ChannelVector {
  Eigen::VectorXcd entries;
  int size() const { return static_cast<int>(entries.size()); }
};

// Complex transmit weights w, in sqrt(W).
struct Beamformer {
  Eigen::VectorXcd weights;
  int size() const { return static_cast<int>(weights.size()); }
  double Power() const { return weights.squaredNorm(); }
};

// g0 / max(d, d_min)^2.
double PathGain(double distance, const RadioParams& params);

// Entry k is exp(i*pi*k*cos_phi), k = 0..M-1.
Eigen::VectorXcd SteeringVector(int num_antennas, double cos_phi);

// Cosine of the angle between the array axis (+x) and the direction
// tx -> rx. Zero when the poses coincide.
double ArrayCosine(const Pose& tx, const Pose& rx);

ChannelVector LosChannel(const Pose& tx, const Pose& rx,
                         const RadioParams& params);

// |h^H w|^2.
double ReceivedSignalPower(const ChannelVector& h, const Beamformer& w);

// log2(1 + signal / (interference + noise)), bits/s/Hz.
double Capacity(double signal, double interference, double noise);

// max(0, c_legit - c_eve).
double SecrecyRate(double c_legit, double c_eve);

struct SecrecyBreakdown {
  double c_legit = 0.0;
  double c_eve = 0.0;
  double c_sec = 0.0;
};

SecrecyBreakdown StepSecrecy(const Pose& bs, const Pose& aav, const Pose& eve,
                             const Pose& jammer, const Beamformer& w,
                             const RadioParams& params);

// Channels from the base station to both receivers plus the jammer
// interference p_j * g(|rx - jammer|) each receiver sees.
struct WiretapLinks {
  ChannelVector legit;
  ChannelVector eve;
  double jam_legit = 0.0;
  double jam_eve = 0.0;
};

WiretapLinks MakeLinks(const Pose& bs, const Pose& aav, const Pose& eve,
                       const Pose& jammer, const RadioParams& params);

// Throws InputError when |w|^2 exceeds p_max by more than 1e-9.
SecrecyBreakdown SecrecyFromLinks(const WiretapLinks& links,
                                  const Beamformer& w,
                                  const RadioParams& params);

}  // namespace lawnsec

#endif  // LAWNSEC_RADIO_H_
