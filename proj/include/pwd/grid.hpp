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

#ifndef PWD_GRID_HPP
#define PWD_GRID_HPP

#include <stdexcept>
#include <vector>

namespace pwd {

/// Uniform time grid with steps+1 nodes t_i = i*h on [0, steps*h].
struct TimeGrid {
  double h = 0.0;
  int steps = 0;

  TimeGrid() = default;
  TimeGrid(double step, int n) : h(step), steps(n) {
    if (!(h > 0.0)) throw std::invalid_argument("TimeGrid: step must be > 0");
    if (steps < 1) throw std::invalid_argument("TimeGrid: need at least one step");
  }
  static TimeGrid from_horizon(double t_max, int n_steps) {
    if (!(t_max > 0.0)) throw std::invalid_argument("TimeGrid: t_max must be > 0");
    return TimeGrid(t_max / n_steps, n_steps);
  }

  int size() const { return steps + 1; }
  double t(int i) const { return i * h; }
  double horizon() const { return steps * h; }
};

// End-corrected trapezoidal weights for \int_0^{t_n} y(tau) dtau from samples
// y_0..y_n.  For n >= 3 the Gregory correction of first order is applied,
// giving O(h^3) accuracy on smooth integrands; small n falls back to
// trapezoid / Simpson.  Weight at sample j for upper index n:
inline double quad_weight(int n, int j, double h) {
  if (n <= 0) return 0.0;
  if (n == 1) return 0.5 * h;
  if (n == 2) return (j == 1) ? 4.0 * h / 3.0 : h / 3.0;
  if (j == 0 || j == n) return 5.0 * h / 12.0;
  if (j == 1 || j == n - 1) return 13.0 * h / 12.0;
  return h;
}

/// Integral of the sample series up to every node, using quad_weight.
std::vector<double> cumulative_integral(const std::vector<double>& y, double h);

}  // namespace pwd

#endif
