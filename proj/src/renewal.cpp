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

#include "pwd/renewal.hpp"

#include <cmath>
#include <stdexcept>

namespace pwd {

WaitingTimeDist::WaitingTimeDist(Kind kind, int stages, double rate)
    : kind_(kind), stages_(stages), rate_(rate) {
  if (!(rate > 0.0))
    throw std::invalid_argument("WaitingTimeDist: rate must be > 0");
  if (stages < 1)
    throw std::invalid_argument("WaitingTimeDist: stages must be >= 1");
}

WaitingTimeDist WaitingTimeDist::exponential(double rate) {
  return WaitingTimeDist(Kind::Exponential, 1, rate);
}

WaitingTimeDist WaitingTimeDist::erlang(int stages, double rate) {
  return WaitingTimeDist(stages == 1 ? Kind::Exponential : Kind::Erlang,
                         stages, rate);
}

double WaitingTimeDist::density(double t) const {
  if (t < 0.0) throw std::invalid_argument("density: t must be >= 0");
  if (stages_ == 1) return rate_ * std::exp(-rate_ * t);
  // Gamma^n t^(n-1) e^(-Gamma t) / (n-1)!
  double coeff = rate_;
  for (int j = 1; j < stages_; ++j) coeff *= rate_ * t / j;
  return coeff * std::exp(-rate_ * t);
}

double WaitingTimeDist::survival(double t) const {
  if (t < 0.0) throw std::invalid_argument("survival: t must be >= 0");
  // e^(-Gamma t) sum_{j<n} (Gamma t)^j / j!
  double term = 1.0, sum = 1.0;
  for (int j = 1; j < stages_; ++j) {
    term *= rate_ * t / j;
    sum += term;
  }
  return sum * std::exp(-rate_ * t);
}

double WaitingTimeDist::density_derivative(double t) const {
  if (t < 0.0) throw std::invalid_argument("density_derivative: t must be >= 0");
  if (stages_ == 1) return -rate_ * rate_ * std::exp(-rate_ * t);
  if (stages_ == 2) return rate_ * rate_ * std::exp(-rate_ * t) * (1.0 - rate_ * t);
  // Gamma^n e^(-Gamma t) t^(n-2) [(n-1) - Gamma t] / (n-1)!
  double coeff = rate_ * rate_;
  for (int j = 1; j < stages_ - 1; ++j) coeff *= rate_ * t / j;
  return coeff * (static_cast<double>(stages_ - 1) - rate_ * t) /
         (stages_ - 1) * std::exp(-rate_ * t);
}

double WaitingTimeDist::density_at_zero() const {
  return stages_ == 1 ? rate_ : 0.0;
}

double WaitingTimeDist::sample(Rng& rng) const {
  double t = 0.0;
  for (int j = 0; j < stages_; ++j) t += rng.exponential(rate_);
  return t;
}

CountingTable counting_probabilities(const WaitingTimeDist& w,
                                     const TimeGrid& grid, int k_max) {
  if (k_max < 0) throw std::invalid_argument("counting_probabilities: k_max < 0");
  const int n = grid.steps;
  CountingTable table;
  table.grid = grid;
  table.p.assign(k_max + 1, std::vector<double>(n + 1, 0.0));

  std::vector<double> f(n + 1);
  for (int i = 0; i <= n; ++i) f[i] = w.density(grid.t(i));
  for (int i = 0; i <= n; ++i) table.p[0][i] = w.survival(grid.t(i));

  for (int k = 1; k <= k_max; ++k) {
    const std::vector<double>& prev = table.p[k - 1];
    std::vector<double>& cur = table.p[k];
    for (int i = 1; i <= n; ++i) {
      double s = 0.0;
      for (int j = 0; j <= i; ++j)
        s += quad_weight(i, j, grid.h) * f[i - j] * prev[j];
      cur[i] = s;
    }
  }
  return table;
}

std::vector<double> parity_q(const WaitingTimeDist& w, const TimeGrid& grid) {
  const int n = grid.steps;
  std::vector<double> f(n + 1), g(n + 1), q(n + 1);
  for (int i = 0; i <= n; ++i) {
    f[i] = w.density(grid.t(i));
    g[i] = w.survival(grid.t(i));
  }
  q[0] = 1.0;
  for (int i = 1; i <= n; ++i) {
    double s = 0.0;
    for (int j = 0; j < i; ++j)
      s += quad_weight(i, j, grid.h) * f[i - j] * q[j];
    q[i] = (g[i] - s) / (1.0 + quad_weight(i, i, grid.h) * f[0]);
  }
  return q;
}

JumpTrajectory sample_trajectory(const WaitingTimeDist& w, double horizon,
                                 Rng& rng) {
  if (!(horizon > 0.0))
    throw std::invalid_argument("sample_trajectory: horizon must be > 0");
  JumpTrajectory traj;
  traj.horizon = horizon;
  double t = 0.0;
  for (;;) {
    t += w.sample(rng);
    if (t > horizon) break;
    traj.jump_times.push_back(t);
  }
  return traj;
}

JumpTrajectory sample_trajectory(const WaitingTimeDist& w, double horizon,
                                 std::uint64_t seed) {
  Rng rng(seed);
  return sample_trajectory(w, horizon, rng);
}

}  // namespace pwd
