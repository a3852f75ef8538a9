// Copyright 2026 The piecewise-dynamics Authors
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

#ifndef PWD_WITNESS_HPP
#define PWD_WITNESS_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pwd/core.hpp"
#include "pwd/engines.hpp"

namespace pwd {

/// Pair of initial states for distinguishability monitoring.
struct StatePair {
  DensityMatrix rho1;
  DensityMatrix rho2;

  StatePair(DensityMatrix a, DensityMatrix b);

  /// Population difference (qubit): rho1(0,0) - rho2(0,0).
  double delta_p() const;
  /// Coherence difference (qubit): rho1(0,1) - rho2(0,1).
  Complex delta_c() const;
};

struct GrowthInterval {
  double t_start = 0.0;
  double t_end = 0.0;
  double max_increment = 0.0;
};

struct GrowthReport {
  std::vector<GrowthInterval> intervals;
  double nm_measure = 0.0;  // sum of positive forward increments
  bool detected = false;
};

struct WitnessReport {
  TimeGrid grid;
  std::vector<std::string> pair_labels;
  std::vector<std::vector<double>> d_values;   // one series per pair
  std::vector<GrowthReport> growth;            // one per pair
  int best_pair = -1;                          // maximizer of nm_measure
  bool detected = false;
};

/// D(t) = trace_distance(Lambda(t) rho1, Lambda(t) rho2) per node.
std::vector<double> trace_distance_series(const MapTrajectory& traj,
                                          const StatePair& pair);

/// Forward-difference growth scan; nm_measure is the grid sum of positive
/// increments, intervals are maximal runs of increments above eps_growth.
GrowthReport detect_growth(const std::vector<double>& series,
                           const TimeGrid& grid, double eps_growth = 1e-9);

/// |X|, |Y|, |Z| series of a diagonal(-plus-corner) qubit trajectory.
/// Throws if any node has off-diagonal structure beyond the corner.
std::map<std::string, std::vector<double>> witness_functions(
    const MapTrajectory& traj);

/// True iff any of |X|, |Y|, |Z| has a growth interval; falls back to
/// pair-based detection with the three axis pairs for non-diagonal maps.
bool witness_detects(const MapTrajectory& traj, double eps_growth = 1e-9);

/// Axis antipodal pairs plus n_random seeded random orthogonal pure pairs.
WitnessReport pair_search(const MapTrajectory& traj, int n_random,
                          std::uint64_t seed, double eps_growth = 1e-9);

/// Fig-style parameter sweep data: scalar witness layers on a
/// (lambda t) x (Gamma/lambda) grid.
struct SurfaceData {
  std::vector<double> lambda_t;              // time axis (lambda = 1 units)
  std::vector<double> ratio;                 // Gamma/lambda axis
  // layer name -> [ratio index][time index]
  std::map<std::string, std::vector<std::vector<double>>> layers;
};

enum class SurfaceExample { Dephasing, Damping };

/// Dephasing: |d-|, |q| with Erlang(3, Gamma), D = cos(lambda t).
/// Damping: |g-|, |h+| with Erlang(2, Gamma), gamma/lambda parameter.
SurfaceData sweep_surface(SurfaceExample example, double gamma_over_lambda,
                          const TimeGrid& t_grid,
                          const std::vector<double>& ratio_grid);

/// Default log-spaced ratio grid for sweeps.
std::vector<double> default_ratio_grid(double lo = 0.25, double hi = 25.0,
                                       int n = 40);

}  // namespace pwd

#endif
