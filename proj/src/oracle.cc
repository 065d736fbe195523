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

#include <algorithm>
#include <cmath>
#include <complex>
#include <iomanip>
#include <limits>
#include <numbers>

#include "lawnsec/errors.h"

namespace lawnsec {
namespace {

constexpr double kParallelTol = 1e-9;

}  // namespace

Beamformer MrtBeamformer(const ChannelVector& h, double power) {
  const double norm = h.entries.norm();
  if (!(norm > 0.0)) throw DegenerateGeometryError("MRT of a zero channel");
  if (!(power >= 0.0)) throw InputError("power must be >= 0");
  return Beamformer{h.entries * (std::sqrt(power) / norm)};
}

Beamformer NullSteeringBeamformer(const ChannelVector& h_legit,
                                  const ChannelVector& h_eve, double power) {
  if (h_legit.size() != h_eve.size()) {
    throw InputError("channel dimension mismatch");
  }
  if (h_legit.size() < 2) {
    throw DegenerateGeometryError("null steering needs at least 2 antennas");
  }
  const double norm_b = h_legit.entries.norm();
  const double norm_e = h_eve.entries.norm();
  if (!(norm_b > 0.0)) throw DegenerateGeometryError("zero legitimate channel");
  if (!(norm_e > 0.0)) return MrtBeamformer(h_legit, power);

  const Eigen::VectorXcd u_e = h_eve.entries / norm_e;
  Eigen::VectorXcd v = h_legit.entries - u_e * u_e.dot(h_legit.entries);
  // Second Gram-Schmidt pass removes the residual left by cancellation.
  v -= u_e * u_e.dot(v);
  const double norm_v = v.norm();
  if (norm_v <= kParallelTol * norm_b) {
    throw DegenerateGeometryError(
        "legitimate and eavesdropper channels are parallel");
  }
  return Beamformer{v * (std::sqrt(power) / norm_v)};
}

BeamOracleResult GridSecrecyBeamformer(const WiretapLinks& links,
                                       const RadioParams& params,
                                       int resolution) {
  if (resolution < 16) throw InputError("resolution must be >= 16");
  const int m = links.legit.size();
  if (links.eve.size() != m) throw InputError("channel dimension mismatch");
  const double norm_b = links.legit.entries.norm();
  if (!(norm_b > 0.0)) throw DegenerateGeometryError("zero legitimate channel");

  const Eigen::VectorXcd u_b = links.legit.entries / norm_b;
  const std::complex<double> c_b = u_b.dot(links.eve.entries);
  Eigen::VectorXcd r = links.eve.entries - u_b * c_b;
  const double c_e = r.norm();
  const bool one_dimensional =
      c_e <= kParallelTol * std::max(links.eve.entries.norm(), 1e-300);

  const double p = params.p_max;
  const double noise = params.noise_power;
  // Gains of the legitimate and eavesdropper links for a unit-norm
  // w = a*u_b + b*u_e: |h_b^H w|^2 = |h_b|^2 |a|^2 and
  // |h_e^H w|^2 = |conj(c_b) a + c_e b|^2.
  auto secrecy = [&](double a, std::complex<double> b) {
    const double sig_b = p * norm_b * norm_b * a * a;
    const double sig_e = p * std::norm(std::conj(c_b) * a + c_e * b);
    return SecrecyRate(Capacity(sig_b, links.jam_legit, noise),
                       Capacity(sig_e, links.jam_eve, noise));
  };

  double best_a = 1.0;
  std::complex<double> best_b = 0.0;
  if (!one_dimensional) {
    std::vector<std::complex<double>> phases(resolution);
    for (int j = 0; j < resolution; ++j) {
      phases[j] = std::polar(1.0, (2.0 * std::numbers::pi * j) / resolution);
    }
    // MRT (a = 1) and the exact null of h_e seed the search; the grid alone
    // can miss the sharp optimum near the null by a visible margin.
    double best = secrecy(1.0, 0.0);
    {
      const double scale = std::hypot(c_e, std::abs(c_b));
      const double a = c_e / scale;
      const std::complex<double> b = -std::conj(c_b) / scale;
      const double v = secrecy(a, b);
      if (v > best) {
        best = v;
        best_a = a;
        best_b = b;
      }
    }
    for (int i = 0; i <= resolution; ++i) {
      const double theta = (0.5 * std::numbers::pi * i) / resolution;
      const double a = std::cos(theta);
      const double s = std::sin(theta);
      for (int j = 0; j < resolution; ++j) {
        const std::complex<double> b = s * phases[j];
        const double v = secrecy(a, b);
        if (v > best) {
          best = v;
          best_a = a;
          best_b = b;
        }
      }
    }
  }

  Eigen::VectorXcd w = u_b * best_a;
  if (!one_dimensional) w += (r / c_e) * best_b;
  w *= std::sqrt(p) / w.norm();
  BeamOracleResult out;
  out.beam.weights = std::move(w);
  out.rates = SecrecyFromLinks(links, out.beam, params);
  return out;
}

Pose DpGraph::CellCenter(int cell, double altitude) const {
  const int row = cell / grid;
  const int col = cell % grid;
  return Pose{(col + 0.5) * cell_width, (row + 0.5) * cell_height, altitude};
}

DpGraph BuildDpGraph(const EnvConfig& config, int grid, int beam_resolution) {
  config.Validate();
  if (grid < 1 || grid > 32) throw InputError("grid must lie in [1, 32]");
  DpGraph g;
  g.grid = grid;
  g.horizon = config.horizon;
  g.cell_width = config.area_width / grid;
  g.cell_height = config.area_height / grid;
  auto cell_of = [&](const Pose& p) {
    const int col = std::clamp(static_cast<int>(p.x / g.cell_width), 0, grid - 1);
    const int row =
        std::clamp(static_cast<int>(p.y / g.cell_height), 0, grid - 1);
    return row * grid + col;
  };
  g.start_cell = cell_of(config.start);
  g.dest_cell = cell_of(config.destination);

  const double alt = config.aav_altitude;
  auto optimal_rate = [&](const Pose& aav) {
    const WiretapLinks links =
        MakeLinks(config.bs, aav, config.eve, config.jammer, config.radio);
    return GridSecrecyBeamformer(links, config.radio, beam_resolution)
        .rates.c_sec;
  };

  const int cells = grid * grid;
  g.cell_c_sec.resize(cells);
  for (int c = 0; c < cells; ++c) g.cell_c_sec[c] = optimal_rate(g.CellCenter(c, alt));

  const double step_len = config.v_max * config.dt;
  const int reach_x = std::max(1, static_cast<int>(step_len / g.cell_width));
  const int reach_y = std::max(1, static_cast<int>(step_len / g.cell_height));
  g.out_edges.assign(cells, {});
  for (int c = 0; c < cells; ++c) {
    const int row = c / grid;
    const int col = c % grid;
    const Pose from = g.CellCenter(c, alt);
    for (int dr = -reach_y; dr <= reach_y; ++dr) {
      for (int dc = -reach_x; dc <= reach_x; ++dc) {
        const int r2 = row + dr;
        const int c2 = col + dc;
        if (r2 < 0 || r2 >= grid || c2 < 0 || c2 >= grid) continue;
        const int to = r2 * grid + c2;
        DpEdge e;
        e.from = c;
        e.to = to;
        if (to == c) {
          e.duration = 1;
          e.gain = g.cell_c_sec[c];
        } else {
          const Pose dest = g.CellCenter(to, alt);
          const double len = std::hypot(dest.x - from.x, dest.y - from.y);
          e.duration = std::max(1, static_cast<int>(std::ceil(len / step_len - 1e-9)));
          for (int s = 1; s <= e.duration; ++s) {
            if (s == e.duration) {
              e.gain += g.cell_c_sec[to];
              continue;
            }
            const double f = static_cast<double>(s) / e.duration;
            e.gain += optimal_rate(Pose{from.x + f * (dest.x - from.x),
                                        from.y + f * (dest.y - from.y), alt});
          }
        }
        g.out_edges[c].push_back(static_cast<int>(g.edges.size()));
        g.edges.push_back(e);
      }
    }
  }
  return g;
}

DpPlan SolveDp(const DpGraph& graph) {
  const int cells = graph.grid * graph.grid;
  const int horizon = graph.horizon;
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  std::vector<double> value(static_cast<std::size_t>(horizon + 1) * cells,
                            kNegInf);
  std::vector<int> back(value.size(), -1);
  auto at = [cells](int t, int c) {
    return static_cast<std::size_t>(t) * cells + c;
  };
  value[at(0, graph.start_cell)] = 0.0;
  for (int t = 0; t < horizon; ++t) {
    for (int c = 0; c < cells; ++c) {
      const double v = value[at(t, c)];
      if (v == kNegInf) continue;
      for (int ei : graph.out_edges[c]) {
        const DpEdge& e = graph.edges[ei];
        const int t2 = t + e.duration;
        if (t2 > horizon) continue;
        const double cand = v + e.gain;
        if (cand > value[at(t2, e.to)]) {
          value[at(t2, e.to)] = cand;
          back[at(t2, e.to)] = ei;
        }
      }
    }
  }
  if (value[at(horizon, graph.dest_cell)] == kNegInf) {
    throw InfeasibleError("destination cell unreachable within the horizon");
  }

  DpPlan plan;
  plan.grid = graph.grid;
  plan.cell_c_sec = graph.cell_c_sec;
  plan.total_secrecy = value[at(horizon, graph.dest_cell)];
  int t = horizon;
  int c = graph.dest_cell;
  while (t > 0) {
    plan.path_cells.push_back(c);
    plan.path_times.push_back(t);
    const DpEdge& e = graph.edges[back[at(t, c)]];
    t -= e.duration;
    c = e.from;
  }
  plan.path_cells.push_back(c);
  plan.path_times.push_back(0);
  std::reverse(plan.path_cells.begin(), plan.path_cells.end());
  std::reverse(plan.path_times.begin(), plan.path_times.end());
  return plan;
}

DpPlan DpTrajectory(const EnvConfig& config, int grid, int beam_resolution) {
  return SolveDp(BuildDpGraph(config, grid, beam_resolution));
}

void WriteHeatmapCsv(std::ostream& out, const DpGraph& graph,
                     double altitude) {
  out << "row,col,x,y,c_sec\n";
  const auto prec = out.precision();
  out << std::setprecision(17);
  for (int c = 0; c < graph.grid * graph.grid; ++c) {
    const Pose p = graph.CellCenter(c, altitude);
    out << c / graph.grid << ',' << c % graph.grid << ',' << p.x << ',' << p.y
        << ',' << graph.cell_c_sec[c] << '\n';
  }
  out.precision(prec);
}

}  // namespace lawnsec
