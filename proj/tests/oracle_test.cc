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

#include "lawnsec/oracle.h"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include "lawnsec/errors.h"
#include "test_util.h"

namespace lawnsec {
namespace {

using testing::RandomBeam;
using testing::RandomComplex;
using testing::RandomPose;
using testing::RelErr;

WiretapLinks RandomLinks(std::mt19937_64& rng, const RadioParams& p) {
  return MakeLinks(RandomPose(rng, 0, 0), RandomPose(rng, 100, 100),
                   RandomPose(rng, 80, 80), RandomPose(rng, 0, 0), p);
}

TEST(MrtTest, Examples) {
  Eigen::VectorXcd h = Eigen::VectorXcd::Zero(4);
  h[0] = 1.0;
  const Beamformer w = MrtBeamformer({h}, 4.0);
  EXPECT_NEAR(std::abs(w.weights[0] - 2.0), 0.0, 1e-15);
  EXPECT_NEAR(w.weights.tail(3).norm(), 0.0, 1e-15);
  EXPECT_THROW(MrtBeamformer({Eigen::VectorXcd::Zero(4)}, 1.0),
               DegenerateGeometryError);
}

TEST(MrtTest, AchievesBoundAndBeatsRandomBeams) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 20; ++i) {
    const ChannelVector h{RandomComplex(4, rng)};
    const Beamformer w = MrtBeamformer(h, 120.0);
    EXPECT_NEAR(w.Power(), 120.0, 1e-9);
    const double best = ReceivedSignalPower(h, w);
    EXPECT_LE(RelErr(best, 120.0 * h.entries.squaredNorm()), 1e-9);
    for (int k = 0; k < 1000; ++k) {
      EXPECT_GT(best, ReceivedSignalPower(h, RandomBeam(4, 120.0, rng)));
    }
  }
}

TEST(NullSteeringTest, OrthogonalChannelsGiveMrt) {
  Eigen::VectorXcd hb = Eigen::VectorXcd::Zero(4), he = Eigen::VectorXcd::Zero(4);
  hb[0] = {1, 1};
  he[1] = {0, 2};
  const Beamformer null = NullSteeringBeamformer({hb}, {he}, 5.0);
  const Beamformer mrt = MrtBeamformer({hb}, 5.0);
  EXPECT_LE((null.weights - mrt.weights).norm(), 1e-14);
}

TEST(NullSteeringTest, ParallelChannelsAreDegenerate) {
  std::mt19937_64 rng(2);
  const Eigen::VectorXcd h = RandomComplex(4, rng);
  EXPECT_THROW(NullSteeringBeamformer({h}, {h}, 1.0), DegenerateGeometryError);
  EXPECT_THROW(NullSteeringBeamformer({h}, {h * std::complex<double>(0, 3)}, 1.0),
               DegenerateGeometryError);
  EXPECT_THROW(NullSteeringBeamformer({h.head(1)}, {h.tail(1)}, 1.0),
               DegenerateGeometryError);
}

TEST(NullSteeringTest, EavesdropperPowerBelowThreshold) {
  RadioParams p;
  std::mt19937_64 rng(3);
  for (int i = 0; i < 200; ++i) {
    const WiretapLinks l = RandomLinks(rng, p);
    const Beamformer w = NullSteeringBeamformer(l.legit, l.eve, p.p_max);
    EXPECT_NEAR(w.Power(), p.p_max, 1e-9);
    EXPECT_LE(ReceivedSignalPower(l.eve, w),
              1e-12 * p.p_max * l.eve.entries.squaredNorm());
  }
}

TEST(GridBeamTest, FarEavesdropperConvergesToMrt) {
  RadioParams p;
  const Pose bs{100, 0, 0}, aav{50, 120, 100}, jam{0, 0, 0};
  const Pose far_eve{1e7, 1e7, 80};
  const WiretapLinks l = MakeLinks(bs, aav, far_eve, jam, p);
  const auto grid = GridSecrecyBeamformer(l, p, 256);
  const auto mrt = SecrecyFromLinks(l, MrtBeamformer(l.legit, p.p_max), p);
  EXPECT_NEAR(grid.rates.c_sec, mrt.c_sec, 1e-6);
  EXPECT_GE(grid.rates.c_sec, mrt.c_sec - 1e-12);
}

TEST(GridBeamTest, IdenticalChannelsGiveZero) {
  RadioParams p;
  const Pose bs{100, 0, 0}, aav{50, 120, 100}, jam{0, 0, 0};
  const WiretapLinks l = MakeLinks(bs, aav, aav, jam, p);
  EXPECT_EQ(GridSecrecyBeamformer(l, p, 64).rates.c_sec, 0.0);
}

TEST(GridBeamTest, ResolutionFloor) {
  RadioParams p;
  std::mt19937_64 rng(4);
  EXPECT_THROW(GridSecrecyBeamformer(RandomLinks(rng, p), p, 15), InputError);
}

TEST(GridBeamTest, ConsistentFullPowerAndMonotone) {
  RadioParams p;
  std::mt19937_64 rng(5);
  for (int i = 0; i < 30; ++i) {
    const WiretapLinks l = RandomLinks(rng, p);
    double prev = -1.0;
    for (int res : {16, 32, 64, 128}) {
      const auto r = GridSecrecyBeamformer(l, p, res);
      EXPECT_NEAR(r.beam.Power(), p.p_max, 1e-9);
      const auto again = SecrecyFromLinks(l, r.beam, p);
      EXPECT_EQ(again.c_sec, r.rates.c_sec);
      EXPECT_GE(r.rates.c_sec, prev);
      prev = r.rates.c_sec;
    }
    const double mrt =
        SecrecyFromLinks(l, MrtBeamformer(l.legit, p.p_max), p).c_sec;
    const double null =
        SecrecyFromLinks(l, NullSteeringBeamformer(l.legit, l.eve, p.p_max), p)
            .c_sec;
    EXPECT_GE(prev, std::max(mrt, null) - 1e-9);
  }
}

TEST(GridBeamTest, BeatsRandomFullSpaceBeams) {
  RadioParams p;
  std::mt19937_64 rng(6);
  for (int i = 0; i < 3; ++i) {
    const WiretapLinks l = RandomLinks(rng, p);
    const double grid = GridSecrecyBeamformer(l, p, 256).rates.c_sec;
    double best = 0.0;
    for (int k = 0; k < 20000; ++k) {
      best = std::max(best, SecrecyFromLinks(l, RandomBeam(4, p.p_max, rng), p).c_sec);
    }
    EXPECT_GE(grid, best - 1e-6);
  }
}

// Uniform random path of exactly `horizon` steps ending at the destination.
double RandomFeasiblePathValue(const DpGraph& g, std::mt19937_64& rng) {
  const int cells = g.grid * g.grid;
  std::vector<std::vector<char>> ok(g.horizon + 1, std::vector<char>(cells, 0));
  ok[0][g.dest_cell] = 1;
  for (int r = 1; r <= g.horizon; ++r) {
    for (int c = 0; c < cells; ++c) {
      for (int e : g.out_edges[c]) {
        const DpEdge& edge = g.edges[e];
        if (edge.duration <= r && ok[r - edge.duration][edge.to]) {
          ok[r][c] = 1;
          break;
        }
      }
    }
  }
  if (!ok[g.horizon][g.start_cell]) return -1.0;
  int cell = g.start_cell, remaining = g.horizon;
  double value = 0.0;
  while (remaining > 0) {
    std::vector<int> choices;
    for (int e : g.out_edges[cell]) {
      const DpEdge& edge = g.edges[e];
      if (edge.duration <= remaining && ok[remaining - edge.duration][edge.to]) {
        choices.push_back(e);
      }
    }
    const DpEdge& pick =
        g.edges[choices[std::uniform_int_distribution<std::size_t>(
            0, choices.size() - 1)(rng)]];
    value += pick.gain;
    remaining -= pick.duration;
    cell = pick.to;
  }
  return value;
}

TEST(DpTest, OneCellGridIsTimesHorizon) {
  EnvConfig c;
  const DpPlan plan = DpTrajectory(c, 1);
  ASSERT_EQ(plan.cell_c_sec.size(), 1u);
  EXPECT_NEAR(plan.total_secrecy, c.horizon * plan.cell_c_sec[0], 1e-9);
}

TEST(DpTest, BeatsRandomFeasiblePaths) {
  EnvConfig c;
  const DpGraph g = BuildDpGraph(c, 10, 32);
  const DpPlan plan = SolveDp(g);
  EXPECT_EQ(plan.path_cells.front(), g.start_cell);
  EXPECT_EQ(plan.path_cells.back(), g.dest_cell);
  EXPECT_EQ(plan.path_times.back(), c.horizon);
  std::mt19937_64 rng(7);
  for (int i = 0; i < 200; ++i) {
    const double v = RandomFeasiblePathValue(g, rng);
    ASSERT_GE(v, 0.0);
    EXPECT_LE(v, plan.total_secrecy + 1e-9);
  }
}

TEST(DpTest, PathRespectsSpeedAndEdges) {
  EnvConfig c;
  c.v_max = 3;
  c.start = {10, 10, 0};
  c.destination = {190, 190, 0};
  const DpGraph g = BuildDpGraph(c, 10, 16);
  const DpPlan plan = SolveDp(g);
  for (std::size_t i = 1; i < plan.path_cells.size(); ++i) {
    const Pose a = g.CellCenter(plan.path_cells[i - 1], 0);
    const Pose b = g.CellCenter(plan.path_cells[i], 0);
    const int steps = plan.path_times[i] - plan.path_times[i - 1];
    ASSERT_GE(steps, 1);
    EXPECT_LE(std::hypot(b.x - a.x, b.y - a.y), c.v_max * c.dt * steps + 1e-9);
  }
}

TEST(DpTest, WithoutAdversaryEveryCellIsNearMrtRate) {
  EnvConfig c;
  c.radio.jammer_power = 0.0;
  c.eve = {1e7, 1e7, 80};
  const DpGraph g = BuildDpGraph(c, 8, 64);
  for (int cell = 0; cell < 64; ++cell) {
    const Pose p = g.CellCenter(cell, c.aav_altitude);
    const WiretapLinks l = MakeLinks(c.bs, p, c.eve, c.jammer, c.radio);
    const double mrt =
        SecrecyFromLinks(l, MrtBeamformer(l.legit, c.radio.p_max), c.radio).c_legit;
    EXPECT_NEAR(g.cell_c_sec[cell], mrt, 1e-6);
  }
  // The benchmark still has to end at the destination; it can only do better
  // than flying straight there and waiting.
  const DpPlan plan = SolveDp(g);
  EXPECT_GE(plan.total_secrecy, 0.0);
  EXPECT_EQ(plan.path_cells.back(), g.dest_cell);
}

TEST(DpTest, InfeasibleAndOutOfRange) {
  EnvConfig c;
  c.horizon = 5;
  EXPECT_THROW(DpTrajectory(c, 10), InfeasibleError);
  EXPECT_THROW(DpTrajectory(EnvConfig{}, 33), InputError);
  EXPECT_THROW(DpTrajectory(EnvConfig{}, 0), InputError);
}

TEST(DpTest, HeatmapCsv) {
  EnvConfig c;
  const DpGraph g = BuildDpGraph(c, 4, 16);
  std::ostringstream out;
  WriteHeatmapCsv(out, g, c.aav_altitude);
  const std::string s = out.str();
  EXPECT_EQ(s.rfind("row,col,x,y,c_sec\n", 0), 0u);
  EXPECT_EQ(std::count(s.begin(), s.end(), '\n'), 17);
}

}  // namespace
}  // namespace lawnsec
