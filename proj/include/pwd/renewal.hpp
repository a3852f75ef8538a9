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

#ifndef PWD_RENEWAL_HPP
#define PWD_RENEWAL_HPP

#include <cstdint>
#include <vector>

#include "pwd/grid.hpp"
#include "pwd/rng.hpp"

namespace pwd {

// Renewal waiting-time distribution of the jump events.  Erlang(n, rate) is
// the n-fold convolution of equal-rate exponentials; Exponential(rate) is the
// n = 1 case kept as its own kind.
class WaitingTimeDist {
 public:
  enum class Kind { Exponential, Erlang };

  static WaitingTimeDist exponential(double rate);
  static WaitingTimeDist erlang(int stages, double rate);

  Kind kind() const { return kind_; }
  double rate() const { return rate_; }
  int stages() const { return stages_; }

  double density(double t) const;        // f(t)
  double survival(double t) const;       // g(t) = 1 - int_0^t f
  double density_derivative(double t) const;  // f'(t)
  double density_at_zero() const;        // f(0)
  double mean() const { return stages_ / rate_; }

  /// One waiting time (sum of `stages` exponential draws).
  double sample(Rng& rng) const;

 private:
  WaitingTimeDist(Kind kind, int stages, double rate);
  Kind kind_;
  int stages_;
  double rate_;
};

/// p_k(t) for k = 0..k_max on a uniform grid; p[k][i] = p_k(t_i).
struct CountingTable {
  TimeGrid grid;
  std::vector<std::vector<double>> p;
};

/// Strictly increasing jump times in [0, T].
struct JumpTrajectory {
  std::vector<double> jump_times;
  double horizon = 0.0;
};

/// Counting probabilities from the renewal recursion
/// p_k = f * p_{k-1}, p_0 = g (end-corrected convolution quadrature).
CountingTable counting_probabilities(const WaitingTimeDist& w,
                                     const TimeGrid& grid, int k_max);

/// Even-minus-odd count probability q(t), from the scalar Volterra equation
/// q + f * q = g; q(0) = 1, |q| <= 1.
std::vector<double> parity_q(const WaitingTimeDist& w, const TimeGrid& grid);

JumpTrajectory sample_trajectory(const WaitingTimeDist& w, double horizon,
                                 std::uint64_t seed);
JumpTrajectory sample_trajectory(const WaitingTimeDist& w, double horizon,
                                 Rng& rng);

}  // namespace pwd

#endif
