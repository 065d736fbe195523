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

// Reference solutions used to judge learned policies: closed-form
// beamformers, an exhaustive secrecy search over span{h_b, h_e}, and a
// dynamic-programming trajectory benchmark on a discretized area.

#ifndef LAWNSEC_ORACLE_H_
#define LAWNSEC_ORACLE_H_

#include <ostream>
#include <vector>

#include "lawnsec/env.h"
#include "lawnsec/radio.h"

namespace lawnsec {

// sqrt(p) * h / |h|. Throws DegenerateGeometryError for a zero channel.
Beamformer MrtBeamformer(const ChannelVector& h, double power);

// MRT on the component of h_b orthogonal to h_e, at power p. Throws
// DegenerateGeometryError when M < 2 or h_b is (numerically) parallel to h_e.
Beamformer NullSteeringBeamformer(const ChannelVector& h_legit,
                                  const ChannelVector& h_eve, double power);

struct BeamOracleResult {
  Beamformer beam;
  SecrecyBreakdown rates;
};

// Exhaustive search over unit-norm w = a*u_b + b*u_e (u_b, u_e orthonormal
// basis of span{h_b, h_e}) at full power. With a = cos(theta) real and
// b = sin(theta) e^{i phi}, theta takes resolution+1 values on [0, pi/2] and
// phi takes resolution values on [0, 2 pi); doubling the resolution yields a
// superset of the grid. The MRT and null-steering points are always among
// the candidates. Requires resolution >= 16.
BeamOracleResult GridSecrecyBeamformer(const WiretapLinks& links,
                                       const RadioParams& params,
                                       int resolution);

// Directed graph over grid cells. Edges join each cell to itself and to the
// cells reachable at speed v_max; an edge lasting k steps earns the sum of
// the optimal secrecy rates at its k interpolated arrival positions.
struct DpEdge {
  int from = 0;
  int to = 0;
  int duration = 1;
  double gain = 0.0;
};

struct DpGraph {
  int grid = 0;
  double cell_width = 0.0;
  double cell_height = 0.0;
  int start_cell = 0;
  int dest_cell = 0;
  int horizon = 0;
  std::vector<double> cell_c_sec;  // optimal-beam c_sec at each cell center
  std::vector<DpEdge> edges;
  std::vector<std::vector<int>> out_edges;  // edge indices per cell

  Pose CellCenter(int cell, double altitude) const;
};

DpGraph BuildDpGraph(const EnvConfig& config, int grid, int beam_resolution);

struct DpPlan {
  int grid = 0;
  std::vector<double> cell_c_sec;
  std::vector<int> path_cells;  // visited cells, starting at the start cell
  std::vector<int> path_times;  // arrival step of each entry in path_cells
  double total_secrecy = 0.0;   // undiscounted, over exactly `horizon` steps
};

// Maximizes summed per-step c_sec over paths of exactly `horizon` steps that
// end in the destination cell. Throws InfeasibleError when no such path
// exists.
DpPlan SolveDp(const DpGraph& graph);

// BuildDpGraph + SolveDp. Requires 1 <= grid <= 32.
DpPlan DpTrajectory(const EnvConfig& config, int grid,
                    int beam_resolution = 64);

// Heatmap rows "row,col,x,y,c_sec" for the per-cell optimal secrecy rate.
void WriteHeatmapCsv(std::ostream& out, const DpGraph& graph,
                     double altitude);

}  // namespace lawnsec

#endif  // LAWNSEC_ORACLE_H_
