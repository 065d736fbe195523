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

#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "lawnsec/errors.h"
#include "lawnsec/oracle.h"
#include "test_util.h"

namespace lawnsec {
namespace {

using std::complex;
using testing::RandomBeam;
using testing::RandomComplex;
using testing::RandomPose;
using testing::RelErr;

constexpr double kPi = std::numbers::pi;

TEST(PathGainTest, ReferenceDistanceAndInverseSquare) {
  RadioParams p;
  EXPECT_DOUBLE_EQ(PathGain(1.0, p), 1e-3);
  EXPECT_NEAR(PathGain(100.0, p), 1e-7, 1e-22);
  EXPECT_DOUBLE_EQ(PathGain(0.1, p), 1e-3);
  EXPECT_DOUBLE_EQ(PathGain(0.0, p), 1e-3);
}

TEST(PathGainTest, RejectsNonFiniteAndNegative) {
  RadioParams p;
  EXPECT_THROW(PathGain(NAN, p), InputError);
  EXPECT_THROW(PathGain(INFINITY, p), InputError);
  EXPECT_THROW(PathGain(-1.0, p), InputError);
}

TEST(PathGainTest, MonotoneAndDoublingDividesByFour) {
  RadioParams p;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> d(1.0, 500.0);
  for (int i = 0; i < 1000; ++i) {
    const double a = d(rng), b = d(rng);
    EXPECT_EQ(a <= b, PathGain(a, p) >= PathGain(b, p));
    EXPECT_LE(RelErr(PathGain(2 * a, p), PathGain(a, p) / 4), 1e-14);
  }
}

TEST(SteeringVectorTest, Examples) {
  const auto broadside = SteeringVector(4, 0.0);
  for (int k = 0; k < 4; ++k) EXPECT_NEAR(std::abs(broadside[k] - 1.0), 0, 1e-15);
  const auto quarter = SteeringVector(4, 0.5);
  const complex<double> expect_q[] = {1.0, {0, 1}, -1.0, {0, -1}};
  for (int k = 0; k < 4; ++k) EXPECT_NEAR(std::abs(quarter[k] - expect_q[k]), 0, 1e-15);
  const auto endfire = SteeringVector(4, 1.0);
  const double expect_e[] = {1, -1, 1, -1};
  for (int k = 0; k < 4; ++k) EXPECT_NEAR(std::abs(endfire[k] - expect_e[k]), 0, 1e-15);
}

TEST(SteeringVectorTest, Errors) {
  EXPECT_THROW(SteeringVector(4, 1.0 + 1e-9), InputError);
  EXPECT_THROW(SteeringVector(4, NAN), InputError);
  EXPECT_THROW(SteeringVector(0, 0.0), InputError);
}

TEST(SteeringVectorTest, UnitModulus) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> c(-1.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const auto v = SteeringVector(8, c(rng));
    for (int k = 0; k < 8; ++k) EXPECT_NEAR(std::abs(v[k]), 1.0, 1e-12);
  }
}

TEST(LosChannelTest, DiagonalGeometryMatchesArithmetic) {
  RadioParams p;
  const ChannelVector h = LosChannel({0, 0, 0}, {100, 0, 100}, p);
  const double d = std::sqrt(2.0) * 100.0;
  const double g = 1e-3 / (d * d);
  EXPECT_LE(RelErr(h.entries.squaredNorm(), 4 * 1e-3 / 2e4), 1e-12);
  for (int k = 0; k < 4; ++k) {
    const complex<double> expect =
        std::sqrt(g) * std::exp(complex<double>(0, kPi * k / std::sqrt(2.0)));
    EXPECT_NEAR(std::abs(h.entries[k] - expect), 0.0, 1e-15);
  }
}

TEST(LosChannelTest, OverheadReceiverHasEqualPhases) {
  RadioParams p;
  const ChannelVector h = LosChannel({0, 0, 0}, {0, 0, 100}, p);
  for (int k = 1; k < 4; ++k) {
    EXPECT_NEAR(std::abs(h.entries[k] - h.entries[0]), 0.0, 1e-18);
  }
}

// Reflecting a receiver through the plane normal to the array axis flips the
// sign of its cosine, hence conjugates every phase.
TEST(LosChannelTest, MirrorAcrossBroadsidePlaneConjugates) {
  RadioParams p;
  std::mt19937_64 rng(7);
  for (int i = 0; i < 100; ++i) {
    const Pose tx{100, 100, 0};
    const Pose rx = RandomPose(rng, 1, 120);
    const Pose mirrored{2 * tx.x - rx.x, rx.y, rx.z};
    const auto a = LosChannel(tx, rx, p);
    const auto b = LosChannel(tx, mirrored, p);
    EXPECT_LE((a.entries.conjugate() - b.entries).norm(),
              1e-12 * a.entries.norm());
  }
}

TEST(LosChannelTest, CoincidentPosesUseClampedGain) {
  RadioParams p;
  const auto h = LosChannel({5, 5, 5}, {5, 5, 5}, p);
  EXPECT_LE(RelErr(h.entries.squaredNorm(), 4 * p.g0), 1e-14);
}

TEST(ReceivedPowerTest, Examples) {
  Eigen::VectorXcd h = Eigen::VectorXcd::Zero(4), w = Eigen::VectorXcd::Zero(4);
  h[0] = 1.0;
  w[0] = 2.0;
  EXPECT_DOUBLE_EQ(ReceivedSignalPower({h}, {w}), 4.0);
  w.setZero();
  w[1] = 3.0;
  EXPECT_DOUBLE_EQ(ReceivedSignalPower({h}, {w}), 0.0);
  EXPECT_THROW(ReceivedSignalPower({h}, {Eigen::VectorXcd::Ones(3)}),
               InputError);
}

TEST(ReceivedPowerTest, MatchesElementwiseSumOracle) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 1000; ++i) {
    const auto h = RandomComplex(4, rng);
    const auto w = RandomComplex(4, rng);
    complex<double> acc = 0.0;
    for (int k = 0; k < 4; ++k) acc += std::conj(h[k]) * w[k];
    const double oracle = acc.real() * acc.real() + acc.imag() * acc.imag();
    EXPECT_LE(RelErr(ReceivedSignalPower({h}, {w}), oracle), 1e-12);
  }
}

TEST(ReceivedPowerTest, CauchySchwarzBoundWithEqualityAtMrt) {
  std::mt19937_64 rng(13);
  const double power = 120.0;
  const auto h = RandomComplex(4, rng);
  const double bound = power * h.squaredNorm();
  const Beamformer mrt{std::sqrt(power) * h / h.norm()};
  EXPECT_LE(RelErr(ReceivedSignalPower({h}, mrt), bound), 1e-12);
  for (int i = 0; i < 1000; ++i) {
    EXPECT_LE(ReceivedSignalPower({h}, RandomBeam(4, power, rng)),
              bound * (1 + 1e-12));
  }
}

TEST(CapacityTest, Examples) {
  EXPECT_DOUBLE_EQ(Capacity(1e-9, 0.0, 1e-9), 1.0);
  EXPECT_DOUBLE_EQ(Capacity(0.0, 1.0, 1e-9), 0.0);
  EXPECT_NEAR(Capacity(4.8e-5, 1e-7, 1e-9), 8.896, 5e-4);
  EXPECT_NEAR(Capacity(4.8e-5, 1e-7, 1e-9),
              std::log2(1.0 + 4.8e-5 / (1e-7 + 1e-9)), 1e-12);
  EXPECT_THROW(Capacity(1.0, 0.0, 0.0), InputError);
  EXPECT_THROW(Capacity(-1.0, 0.0, 1.0), InputError);
}

TEST(CapacityTest, MonotoneInEachArgument) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(1e-9, 1e-3);
  for (int i = 0; i < 1000; ++i) {
    const double s = u(rng), in = u(rng), n = u(rng), d = u(rng);
    EXPECT_GT(Capacity(s + d, in, n), Capacity(s, in, n));
    EXPECT_LT(Capacity(s, in + d, n), Capacity(s, in, n));
    EXPECT_LT(Capacity(s, in, n + d), Capacity(s, in, n));
  }
}

TEST(SecrecyRateTest, Examples) {
  EXPECT_DOUBLE_EQ(SecrecyRate(5, 2), 3);
  EXPECT_DOUBLE_EQ(SecrecyRate(1, 2), 0);
  EXPECT_DOUBLE_EQ(SecrecyRate(2.5, 2.5), 0);
}

TEST(StepSecrecyTest, ColocatedEveWithoutJammerGivesZero) {
  RadioParams p;
  p.jammer_power = 0.0;
  const Pose bs{0, 0, 0}, aav{50, 80, 100}, jam{10, 10, 0};
  const auto h = LosChannel(bs, aav, p);
  const Beamformer w{std::sqrt(p.p_max) * h.entries / h.entries.norm()};
  const auto r = StepSecrecy(bs, aav, aav, jam, w, p);
  EXPECT_DOUBLE_EQ(r.c_sec, 0.0);
  EXPECT_GT(r.c_legit, 0.0);
}

TEST(StepSecrecyTest, NulledEavesdropper) {
  RadioParams p;
  const Pose bs{150, 190, 0}, aav{60, 40, 100}, eve{40, 150, 80},
      jam{60, 100, 0};
  const auto links = MakeLinks(bs, aav, eve, jam, p);
  const Beamformer w = NullSteeringBeamformer(links.legit, links.eve, p.p_max);
  const auto r = StepSecrecy(bs, aav, eve, jam, w, p);
  EXPECT_LT(r.c_eve, 1e-9);
  EXPECT_NEAR(r.c_sec, r.c_legit, 1e-9);
}

TEST(StepSecrecyTest, MatchesIndependentArithmetic) {
  RadioParams p;
  const Pose bs{150, 190, 0}, aav{73.5, 41.25, 100}, eve{40, 150, 80},
      jam{60, 100, 0};
  std::mt19937_64 rng(19);
  const Beamformer w = RandomBeam(4, p.p_max, rng);

  auto channel = [&](const Pose& rx) {
    const double dx = rx.x - bs.x, dy = rx.y - bs.y, dz = rx.z - bs.z;
    const double d = std::sqrt(dx * dx + dy * dy + dz * dz);
    const double amp = std::sqrt(1e-3 / (d * d));
    std::vector<complex<double>> h(4);
    for (int k = 0; k < 4; ++k) {
      h[k] = std::polar(amp, kPi * k * dx / d);
    }
    return h;
  };
  auto power = [&](const std::vector<complex<double>>& h) {
    complex<double> acc = 0.0;
    for (int k = 0; k < 4; ++k) acc += std::conj(h[k]) * w.weights[k];
    return std::norm(acc);
  };
  auto jam_at = [&](const Pose& rx) {
    const double d = std::hypot(rx.x - jam.x, rx.y - jam.y, rx.z - jam.z);
    return 1.0 * 1e-3 / (d * d);
  };
  const double cb = std::log2(1 + power(channel(aav)) / (jam_at(aav) + 1e-9));
  const double ce = std::log2(1 + power(channel(eve)) / (jam_at(eve) + 1e-9));

  const auto r = StepSecrecy(bs, aav, eve, jam, w, p);
  EXPECT_LE(RelErr(r.c_legit, cb), 1e-10);
  EXPECT_LE(RelErr(r.c_eve, ce), 1e-10);
  EXPECT_LE(std::abs(r.c_sec - std::max(0.0, cb - ce)),
            1e-10 * std::max(1.0, cb));
}

TEST(StepSecrecyTest, RejectsOverBudgetBeam) {
  RadioParams p;
  Beamformer w{Eigen::VectorXcd::Constant(4, std::sqrt(p.p_max / 4) * 1.001)};
  EXPECT_THROW(StepSecrecy({0, 0, 0}, {10, 10, 100}, {50, 50, 80},
                           {20, 0, 0}, w, p),
               InputError);
}

TEST(StepSecrecyTest, SecrecyBoundedByLegitimateCapacity) {
  RadioParams p;
  std::mt19937_64 rng(23);
  for (int i = 0; i < 1000; ++i) {
    const auto r = StepSecrecy(RandomPose(rng, 0, 0), RandomPose(rng, 100, 100),
                               RandomPose(rng, 80, 80), RandomPose(rng, 0, 0),
                               RandomBeam(4, p.p_max, rng), p);
    EXPECT_GE(r.c_sec, 0.0);
    EXPECT_LE(r.c_sec, r.c_legit);
  }
}

TEST(RadioParamsTest, Validation) {
  RadioParams p;
  EXPECT_NO_THROW(p.Validate());
  p.num_antennas = 0;
  EXPECT_THROW(p.Validate(), ConfigError);
  p = {};
  p.noise_power = 0;
  EXPECT_THROW(p.Validate(), ConfigError);
  p = {};
  p.jammer_power = -1;
  EXPECT_THROW(p.Validate(), ConfigError);
  EXPECT_THROW((Pose{0, 0, -1}.Validate()), InputError);
  EXPECT_THROW((Pose{NAN, 0, 0}.Validate()), InputError);
}

}  // namespace
}  // namespace lawnsec
